//! Run reports and the results table in text, JSON and CSV.

use std::fmt::Write as _;
use std::str::FromStr;

use homcheck_core::stats::{Adjudicated, AdjudicationRecord, ErrorCategory, Verdict};
use homcheck_core::{Hypothesis, HypothesisSummary};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub const FORMAT_VERSION: u32 = 1;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Text,
    Json,
    Csv,
}

impl FromStr for Format {
    type Err = Error;

    fn from_str(s: &str) -> Result<Format> {
        match s {
            "text" | "txt" => Ok(Format::Text),
            "json" => Ok(Format::Json),
            "csv" => Ok(Format::Csv),
            other => Err(Error::Usage(format!(
                "unknown format {other:?} (expected text, json or csv)"
            ))),
        }
    }
}

impl Format {
    /// Format implied by an output file extension.
    pub fn from_extension(path: &std::path::Path) -> Option<Format> {
        path.extension()?.to_str()?.parse().ok()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ExceptionStatus {
    Actual,
    DataError,
    Unadjudicated,
}

impl ExceptionStatus {
    pub fn as_str(self) -> &'static str {
        match self {
            ExceptionStatus::Actual => "actual",
            ExceptionStatus::DataError => "data-error",
            ExceptionStatus::Unadjudicated => "unadjudicated",
        }
    }
}

/// One piece of evidence behind an exception: an occurrence, a prediction
/// or a cluster member.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Evidence {
    pub role: String,
    pub id: String,
    #[serde(default, skip_serializing_if = "String::is_empty")]
    pub sentence_id: String,
    #[serde(default, skip_serializing_if = "String::is_empty")]
    pub text: String,
    pub keys: Vec<String>,
    pub homonym: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExceptionRecord {
    pub hypothesis: Hypothesis,
    /// The adjudication key of the exception.
    pub key: String,
    pub word: String,
    pub homonyms: Vec<String>,
    pub status: ExceptionStatus,
    pub category: Option<ErrorCategory>,
    #[serde(default, skip_serializing_if = "String::is_empty")]
    pub note: String,
    pub evidence: Vec<Evidence>,
}

impl ExceptionRecord {
    fn sort_key(&self) -> (Hypothesis, &str) {
        (self.hypothesis, &self.key)
    }
}

/// Fills in status, category and note of each exception from the
/// adjudication outcome.
pub fn mark_exceptions(exceptions: &mut [ExceptionRecord], adjudicated: &Adjudicated, records: &[AdjudicationRecord]) {
    for e in exceptions.iter_mut() {
        let record = records
            .iter()
            .find(|r| r.hypothesis == e.hypothesis && r.instance_key == e.key);
        e.status = match record.map(|r| r.verdict) {
            Some(Verdict::Actual) => ExceptionStatus::Actual,
            Some(Verdict::DataError) => ExceptionStatus::DataError,
            None => ExceptionStatus::Unadjudicated,
        };
        debug_assert_eq!(
            adjudicated.data_error.contains(&e.key),
            e.status == ExceptionStatus::DataError
        );
        if let Some(r) = record {
            e.category = Some(r.category);
            e.note = r.note.clone();
        }
    }
}

/// Output of one checker run.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunReport {
    pub format_version: u32,
    pub summary: HypothesisSummary,
    pub adjudication: Adjudicated,
    pub exceptions: Vec<ExceptionRecord>,
    /// Checker-specific detail: instances, skipped input, counts.
    pub details: serde_json::Value,
    pub notes: Vec<String>,
}

impl RunReport {
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }

    pub fn emit(&self, format: Format) -> String {
        match format {
            Format::Json => self.to_json(),
            _ => {
                let mut out = emit(std::slice::from_ref(&self.summary), &self.exceptions, format);
                if format == Format::Text && !self.notes.is_empty() {
                    out.push('\n');
                    for n in &self.notes {
                        let _ = writeln!(out, "note: {n}");
                    }
                }
                out
            }
        }
    }
}

/// Summaries and exceptions of one or more runs, the JSON form of [`emit`].
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Table {
    pub format_version: u32,
    pub summaries: Vec<HypothesisSummary>,
    pub exceptions: Vec<ExceptionRecord>,
}

impl Table {
    pub fn new(summaries: &[HypothesisSummary], exceptions: &[ExceptionRecord]) -> Table {
        let mut summaries = summaries.to_vec();
        summaries.sort_by(|a, b| (a.hypothesis, &a.corpus).cmp(&(b.hypothesis, &b.corpus)));
        let mut exceptions = exceptions.to_vec();
        exceptions.sort_by(|a, b| a.sort_key().cmp(&b.sort_key()));
        Table {
            format_version: FORMAT_VERSION,
            summaries,
            exceptions,
        }
    }
}

const HEADER: [&str; 8] = [
    "#",
    "Hypothesis",
    "Focus",
    "Corpus",
    "Instances",
    "Exceptions apparent",
    "Exceptions actual",
    "Support (%)",
];

fn summary_cells(i: usize, s: &HypothesisSummary) -> [String; 8] {
    let mut support = s.support_display();
    if s.lower_bound {
        support.push('*');
    }
    [
        (i + 1).to_string(),
        s.hypothesis.tag().to_owned(),
        s.hypothesis.focus().to_owned(),
        s.corpus.clone(),
        s.instances.to_string(),
        s.apparent_exceptions.to_string(),
        s.actual_exceptions.to_string(),
        support,
    ]
}

fn text_table(table: &Table) -> String {
    let rows: Vec<[String; 8]> = table
        .summaries
        .iter()
        .enumerate()
        .map(|(i, s)| summary_cells(i, s))
        .collect();
    let header = [
        "#",
        "Hypothesis",
        "Focus",
        "Corpus",
        "Instances",
        "Exceptions",
        "",
        "Support (%)",
    ];
    let sub = ["", "", "", "", "", "apparent", "actual", ""];
    let mut widths = [0usize; 8];
    for r in rows
        .iter()
        .map(|r| r.iter().map(String::as_str).collect::<Vec<_>>())
        .chain([header.to_vec(), sub.to_vec()])
    {
        for (w, c) in widths.iter_mut().zip(&r) {
            *w = (*w).max(c.chars().count());
        }
    }
    let numeric = [true, false, false, false, true, true, true, true];
    let line = |cells: &[&str]| {
        let mut s = String::new();
        for (i, c) in cells.iter().enumerate() {
            if i > 0 {
                s.push_str("  ");
            }
            let pad = widths[i] - c.chars().count();
            if numeric[i] && !c.is_empty() && !header.contains(c) && !sub.contains(c) {
                s.push_str(&" ".repeat(pad));
                s.push_str(c);
            } else {
                s.push_str(c);
                s.push_str(&" ".repeat(pad));
            }
        }
        s.trim_end().to_owned() + "\n"
    };
    let mut out = line(&header);
    out.push_str(&line(&sub));
    for r in &rows {
        let cells: Vec<&str> = r.iter().map(String::as_str).collect();
        out.push_str(&line(&cells));
    }
    if table.summaries.iter().any(|s| s.lower_bound) {
        out.push_str("* lower bound estimate\n");
    }
    if !table.exceptions.is_empty() {
        out.push_str("\nExceptions\n");
        for e in &table.exceptions {
            let _ = write!(
                out,
                "{} {} [{}] homonyms: {}",
                e.hypothesis,
                e.key,
                e.status.as_str(),
                e.homonyms.join(", ")
            );
            if let Some(c) = e.category {
                let _ = write!(out, " category: {}", c.as_str());
            }
            if !e.note.is_empty() {
                let _ = write!(out, " note: {}", e.note);
            }
            out.push('\n');
            for ev in &e.evidence {
                let _ = write!(out, "  {} {}", ev.role, ev.id);
                if !ev.sentence_id.is_empty() {
                    let _ = write!(out, " ({})", ev.sentence_id);
                }
                if ev.keys.len() != 1 || ev.keys[0] != ev.id {
                    let _ = write!(out, " {}", ev.keys.join(" "));
                }
                let _ = write!(out, " -> {}", ev.homonym.as_deref().unwrap_or("-"));
                if !ev.text.is_empty() {
                    let _ = write!(out, " | {}", ev.text);
                }
                out.push('\n');
            }
        }
    }
    out
}

fn csv_table(table: &Table) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(HEADER).expect("in-memory write");
    for (i, s) in table.summaries.iter().enumerate() {
        w.write_record(summary_cells(i, s)).expect("in-memory write");
    }
    let mut out = String::from_utf8(w.into_inner().expect("in-memory flush")).expect("utf-8");
    if !table.exceptions.is_empty() {
        out.push('\n');
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record([
            "hypothesis",
            "key",
            "word",
            "homonyms",
            "status",
            "category",
            "note",
            "evidence",
        ])
        .expect("in-memory write");
        for e in &table.exceptions {
            let evidence: Vec<String> = e
                .evidence
                .iter()
                .map(|ev| format!("{}:{}={}", ev.role, ev.id, ev.homonym.as_deref().unwrap_or("-")))
                .collect();
            w.write_record([
                e.hypothesis.tag(),
                &e.key,
                &e.word,
                &e.homonyms.join(" "),
                e.status.as_str(),
                e.category.map(|c| c.as_str()).unwrap_or(""),
                &e.note,
                &evidence.join(" "),
            ])
            .expect("in-memory write");
        }
        out.push_str(&String::from_utf8(w.into_inner().expect("in-memory flush")).expect("utf-8"));
    }
    out
}

/// Renders summary rows and exceptions. Rows are sorted by hypothesis then
/// corpus, exceptions by hypothesis then key.
pub fn emit(summaries: &[HypothesisSummary], exceptions: &[ExceptionRecord], format: Format) -> String {
    let table = Table::new(summaries, exceptions);
    match format {
        Format::Text => text_table(&table),
        Format::Json => {
            let mut s = serde_json::to_string_pretty(&table).expect("table serializes");
            s.push('\n');
            s
        }
        Format::Csv => csv_table(&table),
    }
}
