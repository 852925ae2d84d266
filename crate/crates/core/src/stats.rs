//! χ² test on 2×2 tables, support accounting and adjudication.

use alloc::borrow::ToOwned;
use alloc::collections::{BTreeMap, BTreeSet};
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use serde::{Deserialize, Serialize};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum StatsError {
    /// A row or column of the table sums to zero.
    ZeroMarginal,
    Inconsistent {
        instances: u64,
        apparent: u64,
        actual: u64,
    },
    UnknownAdjudicationKeys(Vec<String>),
    DuplicateAdjudication(String),
    UnknownHypothesis(String),
    UnknownVerdict(String),
    UnknownCategory(String),
}

impl fmt::Display for StatsError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            StatsError::ZeroMarginal => f.write_str("chi-squared statistic undefined: a row or column total is zero"),
            StatsError::Inconsistent {
                instances,
                apparent,
                actual,
            } => write!(
                f,
                "inconsistent counts: need actual ({actual}) <= apparent ({apparent}) <= instances ({instances})"
            ),
            StatsError::UnknownAdjudicationKeys(keys) => {
                write!(f, "adjudication records match no apparent exception: ")?;
                for (i, k) in keys.iter().enumerate() {
                    if i > 0 {
                        f.write_str(", ")?;
                    }
                    f.write_str(k)?;
                }
                Ok(())
            }
            StatsError::DuplicateAdjudication(k) => write!(f, "instance {k} adjudicated twice"),
            StatsError::UnknownHypothesis(s) => write!(f, "unknown hypothesis {s:?}"),
            StatsError::UnknownVerdict(s) => write!(f, "unknown verdict {s:?}"),
            StatsError::UnknownCategory(s) => write!(f, "unknown error category {s:?}"),
        }
    }
}

#[cfg(feature = "std")]
impl std::error::Error for StatsError {}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Hypothesis {
    #[serde(rename = "OHPT")]
    Ohpt,
    #[serde(rename = "OHPD")]
    Ohpd,
    #[serde(rename = "OHPC")]
    Ohpc,
    #[serde(rename = "OHPSC")]
    Ohpsc,
}

impl Hypothesis {
    pub fn tag(self) -> &'static str {
        match self {
            Hypothesis::Ohpt => "OHPT",
            Hypothesis::Ohpd => "OHPD",
            Hypothesis::Ohpc => "OHPC",
            Hypothesis::Ohpsc => "OHPSC",
        }
    }

    /// What a single instance is drawn over.
    pub fn focus(self) -> &'static str {
        match self {
            Hypothesis::Ohpt => "translations",
            Hypothesis::Ohpd => "documents",
            Hypothesis::Ohpc => "collocations",
            Hypothesis::Ohpsc => "sense clusters",
        }
    }
}

impl fmt::Display for Hypothesis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}

impl FromStr for Hypothesis {
    type Err = StatsError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim().to_ascii_uppercase().as_str() {
            "OHPT" => Ok(Hypothesis::Ohpt),
            "OHPD" => Ok(Hypothesis::Ohpd),
            "OHPC" => Ok(Hypothesis::Ohpc),
            "OHPSC" => Ok(Hypothesis::Ohpsc),
            _ => Err(StatsError::UnknownHypothesis(s.to_owned())),
        }
    }
}

/// `[[a, b], [c, d]]`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ContingencyTable2x2 {
    pub a: u64,
    pub b: u64,
    pub c: u64,
    pub d: u64,
}

/// Significance levels and their df=1 critical values.
pub const CRITICAL_VALUES_DF1: [(f64, f64); 4] = [(0.05, 3.841), (0.01, 6.635), (0.005, 7.879), (0.001, 10.828)];

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ChiSquared {
    pub statistic: f64,
    /// One flag per entry of [`CRITICAL_VALUES_DF1`].
    pub significant: [bool; 4],
}

impl ChiSquared {
    /// Whether the statistic clears the critical value for `p`; `None` if
    /// `p` is not one of the tabulated levels.
    pub fn significant_at(&self, p: f64) -> Option<bool> {
        CRITICAL_VALUES_DF1
            .iter()
            .position(|&(level, _)| level == p)
            .map(|i| self.significant[i])
    }
}

impl ContingencyTable2x2 {
    pub fn new(a: u64, b: u64, c: u64, d: u64) -> Self {
        ContingencyTable2x2 { a, b, c, d }
    }

    pub fn total(&self) -> u64 {
        self.a + self.b + self.c + self.d
    }

    pub fn transpose(&self) -> Self {
        ContingencyTable2x2::new(self.a, self.c, self.b, self.d)
    }

    pub fn swap_rows(&self) -> Self {
        ContingencyTable2x2::new(self.c, self.d, self.a, self.b)
    }

    pub fn swap_columns(&self) -> Self {
        ContingencyTable2x2::new(self.b, self.a, self.d, self.c)
    }

    /// Pearson's statistic `n(ad - bc)^2 / ((a+b)(c+d)(a+c)(b+d))`, with
    /// Yates' continuity correction when `yates` is set.
    pub fn chi_squared(&self, yates: bool) -> Result<ChiSquared, StatsError> {
        let (a, b, c, d) = (self.a as f64, self.b as f64, self.c as f64, self.d as f64);
        let marginals = [a + b, c + d, a + c, b + d];
        if marginals.contains(&0.0) {
            return Err(StatsError::ZeroMarginal);
        }
        let n = a + b + c + d;
        let mut diff = libm::fabs(a * d - b * c);
        if yates {
            diff = (diff - n / 2.0).max(0.0);
        }
        let statistic = n * diff * diff / marginals.iter().product::<f64>();
        let mut significant = [false; 4];
        for (flag, &(_, critical)) in significant.iter_mut().zip(CRITICAL_VALUES_DF1.iter()) {
            *flag = statistic > critical;
        }
        Ok(ChiSquared { statistic, significant })
    }
}

/// `(instances - exceptions) / instances * 100`; 100 when there are no
/// instances.
pub fn support_pct(instances: u64, exceptions: u64) -> f64 {
    if instances == 0 {
        100.0
    } else {
        (instances - exceptions.min(instances)) as f64 / instances as f64 * 100.0
    }
}

/// Support rendered with one decimal, rounding halves up, computed in exact
/// integer arithmetic. `n/a` when there are no instances.
pub fn format_support(instances: u64, exceptions: u64) -> String {
    if instances == 0 {
        return "n/a".to_owned();
    }
    let kept = u128::from(instances - exceptions.min(instances));
    let n = u128::from(instances);
    // tenths of a percent: floor(1000 * kept / n + 1/2)
    let tenths = (2000 * kept + n) / (2 * n);
    alloc::format!("{}.{}", tenths / 10, tenths % 10)
}

/// One row of the results table.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct HypothesisSummary {
    pub hypothesis: Hypothesis,
    pub corpus: String,
    pub instances: u64,
    pub apparent_exceptions: u64,
    pub actual_exceptions: u64,
    pub support_pct: f64,
    /// The support value is a lower bound (classifier-based evidence).
    pub lower_bound: bool,
}

impl HypothesisSummary {
    pub fn new(
        hypothesis: Hypothesis,
        corpus: &str,
        instances: u64,
        apparent: u64,
        actual: u64,
    ) -> Result<Self, StatsError> {
        if actual > apparent || apparent > instances {
            return Err(StatsError::Inconsistent {
                instances,
                apparent,
                actual,
            });
        }
        Ok(HypothesisSummary {
            hypothesis,
            corpus: corpus.to_owned(),
            instances,
            apparent_exceptions: apparent,
            actual_exceptions: actual,
            support_pct: support_pct(instances, actual),
            lower_bound: hypothesis == Hypothesis::Ohpc,
        })
    }

    /// Unadjudicated summary: every apparent exception counts as actual.
    pub fn apparent(hypothesis: Hypothesis, corpus: &str, instances: u64, apparent: u64) -> Self {
        Self::new(hypothesis, corpus, instances, apparent, apparent).expect("apparent exceptions bounded by instances")
    }

    pub fn support_display(&self) -> String {
        format_support(self.instances, self.actual_exceptions)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    Actual,
    DataError,
}

impl FromStr for Verdict {
    type Err = StatsError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim() {
            "actual" => Ok(Verdict::Actual),
            "data-error" => Ok(Verdict::DataError),
            other => Err(StatsError::UnknownVerdict(other.to_owned())),
        }
    }
}

/// Where a data error came from.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ErrorCategory {
    SenseAnnotation,
    Translation,
    ClusterResource,
    HomonymMapping,
    ParallelHomonymy,
    Other,
}

impl ErrorCategory {
    pub fn as_str(self) -> &'static str {
        match self {
            ErrorCategory::SenseAnnotation => "sense-annotation",
            ErrorCategory::Translation => "translation",
            ErrorCategory::ClusterResource => "cluster-resource",
            ErrorCategory::HomonymMapping => "homonym-mapping",
            ErrorCategory::ParallelHomonymy => "parallel-homonymy",
            ErrorCategory::Other => "other",
        }
    }
}

impl FromStr for ErrorCategory {
    type Err = StatsError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Ok(match s.trim() {
            "sense-annotation" => ErrorCategory::SenseAnnotation,
            "translation" => ErrorCategory::Translation,
            "cluster-resource" => ErrorCategory::ClusterResource,
            "homonym-mapping" => ErrorCategory::HomonymMapping,
            "parallel-homonymy" => ErrorCategory::ParallelHomonymy,
            "other" => ErrorCategory::Other,
            other => return Err(StatsError::UnknownCategory(other.to_owned())),
        })
    }
}

/// A human judgement on one apparent exception.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AdjudicationRecord {
    pub hypothesis: Hypothesis,
    pub instance_key: String,
    pub verdict: Verdict,
    pub category: ErrorCategory,
    pub note: String,
}

/// Apparent exceptions split by adjudication outcome. Each apparent
/// exception lands in exactly one list.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Adjudicated {
    pub actual: Vec<String>,
    pub data_error: Vec<String>,
    /// No record; counted as actual.
    pub unadjudicated: Vec<String>,
}

impl Adjudicated {
    pub fn actual_count(&self) -> u64 {
        (self.actual.len() + self.unadjudicated.len()) as u64
    }
}

/// Splits `apparent` exception keys by the records of `hypothesis`.
/// Records of other hypotheses are ignored.
pub fn apply_adjudication(
    hypothesis: Hypothesis,
    apparent: &[String],
    records: &[AdjudicationRecord],
) -> Result<Adjudicated, StatsError> {
    let mut by_key: BTreeMap<&str, Verdict> = BTreeMap::new();
    for r in records.iter().filter(|r| r.hypothesis == hypothesis) {
        if by_key.insert(&r.instance_key, r.verdict).is_some() {
            return Err(StatsError::DuplicateAdjudication(r.instance_key.clone()));
        }
    }
    let apparent_set: BTreeSet<&str> = apparent.iter().map(String::as_str).collect();
    let unknown: Vec<String> = by_key
        .keys()
        .filter(|k| !apparent_set.contains(*k))
        .map(|k| (*k).to_owned())
        .collect();
    if !unknown.is_empty() {
        return Err(StatsError::UnknownAdjudicationKeys(unknown));
    }
    let mut out = Adjudicated::default();
    for key in apparent_set {
        match by_key.get(key) {
            Some(Verdict::Actual) => out.actual.push(key.to_owned()),
            Some(Verdict::DataError) => out.data_error.push(key.to_owned()),
            None => out.unadjudicated.push(key.to_owned()),
        }
    }
    Ok(out)
}

/// Builds the adjudicated summary row for a checker run.
pub fn adjudicate_summary(
    hypothesis: Hypothesis,
    corpus: &str,
    instances: u64,
    apparent: &[String],
    records: &[AdjudicationRecord],
) -> Result<(HypothesisSummary, Adjudicated), StatsError> {
    let adjudicated = apply_adjudication(hypothesis, apparent, records)?;
    let summary = HypothesisSummary::new(
        hypothesis,
        corpus,
        instances,
        apparent.len() as u64,
        adjudicated.actual_count(),
    )?;
    Ok((summary, adjudicated))
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::format;
    use alloc::string::ToString;
    use alloc::vec;

    #[test]
    fn chi_squared_reference_table() {
        // 40 * (16*14 - 4*6)^2 / (20*20*22*18) = 1_600_000 / 158_400
        let t = ContingencyTable2x2::new(16, 4, 6, 14);
        let r = t.chi_squared(false).unwrap();
        assert!((r.statistic - 1_600_000.0 / 158_400.0).abs() < 1e-12);
        assert!((r.statistic - 10.10).abs() < 0.01);
        assert_eq!(r.significant_at(0.005), Some(true));
        assert_eq!(r.significant_at(0.001), Some(false));
        assert_eq!(r.significant_at(0.2), None);
        let swapped = t.swap_rows().chi_squared(false).unwrap();
        assert_eq!(swapped.statistic, r.statistic);
    }

    #[test]
    fn independence_gives_zero() {
        let r = ContingencyTable2x2::new(10, 10, 10, 10).chi_squared(false).unwrap();
        assert_eq!(r.statistic, 0.0);
        assert_eq!(r.significant, [false; 4]);
    }

    #[test]
    fn zero_marginal_is_an_error() {
        assert_eq!(
            ContingencyTable2x2::new(0, 0, 3, 4).chi_squared(false),
            Err(StatsError::ZeroMarginal)
        );
        assert_eq!(
            ContingencyTable2x2::new(0, 5, 0, 4).chi_squared(false),
            Err(StatsError::ZeroMarginal)
        );
    }

    #[test]
    fn yates_correction_shrinks_statistic() {
        // 40 * (200 - 20)^2 / 158_400
        let r = ContingencyTable2x2::new(16, 4, 6, 14).chi_squared(true).unwrap();
        assert!((r.statistic - 40.0 * 180.0 * 180.0 / 158_400.0).abs() < 1e-12);
    }

    #[test]
    fn support_formatting() {
        assert_eq!(format_support(1093, 1), "99.9");
        assert_eq!(format_support(1093, 2), "99.8");
        assert_eq!(format_support(2126, 9), "99.6");
        assert_eq!(format_support(522, 11), "97.9");
        assert_eq!(format_support(1578, 2), "99.9");
        assert_eq!(format_support(10, 0), "100.0");
        // exactly half: 99.95 rounds up
        assert_eq!(format_support(2000, 1), "100.0");
        assert_eq!(format_support(0, 0), "n/a");
        assert_eq!(format_support(4, 4), "0.0");
    }

    #[test]
    fn summary_invariants() {
        assert!(HypothesisSummary::new(Hypothesis::Ohpd, "x", 5, 2, 3).is_err());
        assert!(HypothesisSummary::new(Hypothesis::Ohpd, "x", 5, 6, 3).is_err());
        let s = HypothesisSummary::new(Hypothesis::Ohpc, "x", 522, 16, 11).unwrap();
        assert!(s.lower_bound);
        assert_eq!(s.support_display(), "97.9");
    }

    fn rec(h: Hypothesis, key: &str, v: Verdict) -> AdjudicationRecord {
        AdjudicationRecord {
            hypothesis: h,
            instance_key: key.into(),
            verdict: v,
            category: ErrorCategory::SenseAnnotation,
            note: String::new(),
        }
    }

    #[test]
    fn adjudication_msc_row() {
        let apparent: Vec<String> = (0..7).map(|i| format!("w{i}#n#t")).collect();
        let records: Vec<_> = (1..7)
            .map(|i| rec(Hypothesis::Ohpt, &format!("w{i}#n#t"), Verdict::DataError))
            .collect();
        let (s, a) = adjudicate_summary(Hypothesis::Ohpt, "MSC", 1093, &apparent, &records).unwrap();
        assert_eq!((s.apparent_exceptions, s.actual_exceptions), (7, 1));
        assert_eq!(s.support_display(), "99.9");
        assert_eq!(a.unadjudicated, vec!["w0#n#t".to_string()]);
    }

    #[test]
    fn adjudication_defaults_and_errors() {
        let apparent = vec!["a".to_string(), "b".to_string()];
        let a = apply_adjudication(Hypothesis::Ohpd, &apparent, &[]).unwrap();
        assert_eq!(a.actual_count(), 2);
        let err = apply_adjudication(
            Hypothesis::Ohpd,
            &apparent,
            &[rec(Hypothesis::Ohpd, "zzz", Verdict::Actual)],
        )
        .unwrap_err();
        assert_eq!(err, StatsError::UnknownAdjudicationKeys(vec!["zzz".into()]));
        // other hypotheses are not matched against this report
        let a = apply_adjudication(
            Hypothesis::Ohpd,
            &apparent,
            &[rec(Hypothesis::Ohpt, "zzz", Verdict::Actual)],
        )
        .unwrap();
        assert_eq!(a.unadjudicated.len(), 2);
        assert!(matches!(
            apply_adjudication(
                Hypothesis::Ohpd,
                &apparent,
                &[
                    rec(Hypothesis::Ohpd, "a", Verdict::Actual),
                    rec(Hypothesis::Ohpd, "a", Verdict::DataError)
                ],
            ),
            Err(StatsError::DuplicateAdjudication(_))
        ));
    }

    #[test]
    fn ohpd_row() {
        let apparent: Vec<String> = (0..14).map(|i| format!("k{i:02}")).collect();
        let records: Vec<_> = (0..5)
            .map(|i| rec(Hypothesis::Ohpd, &format!("k{i:02}"), Verdict::DataError))
            .chain((5..14).map(|i| rec(Hypothesis::Ohpd, &format!("k{i:02}"), Verdict::Actual)))
            .collect();
        let (s, a) = adjudicate_summary(Hypothesis::Ohpd, "SemCor", 2126, &apparent, &records).unwrap();
        assert_eq!(s.actual_exceptions, 9);
        assert!((s.support_pct - 2117.0 / 2126.0 * 100.0).abs() < 1e-12);
        assert_eq!(s.support_display(), "99.6");
        assert_eq!(a.actual.len() + a.data_error.len() + a.unadjudicated.len(), 14);
    }
}
