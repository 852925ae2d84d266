//! Checker runs: from loaded inputs to adjudicated reports.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;
use std::path::Path;

use homcheck_core::ohpc::{Models, OhpcReport};
use homcheck_core::ohpd::OhpdReport;
use homcheck_core::ohpsc::{ClusterStatus, OhpscReport};
use homcheck_core::ohpt::{
    self, CompareOptions, DerivedClustering, HomonymGrouping, Occurrence, OhptReport, PartitionComparison,
    SenseGrouping,
};
use homcheck_core::stats::{adjudicate_summary, AdjudicationRecord, CRITICAL_VALUES_DF1};
use homcheck_core::{
    AlignmentSet, AnnotatedCorpus, AnnotatedInstance, Hypothesis, Lexicon, SenseClustering, SenseMap, Word,
};
use serde::{Deserialize, Serialize};
use serde_json::json;
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::formats::{LoadedCorpus, SenseMapFile};
use crate::parallel;
use crate::report::{mark_exceptions, Evidence, ExceptionRecord, ExceptionStatus, RunReport, FORMAT_VERSION};

/// The sentence of `inst` with the focus token in brackets.
pub fn sentence_text(corpus: &AnnotatedCorpus, inst: &AnnotatedInstance) -> String {
    let sentence = corpus.sentence_of(inst);
    let words: Vec<String> = sentence
        .tokens
        .iter()
        .enumerate()
        .map(|(i, t)| {
            if i == inst.position {
                format!("[{}]", t.surface)
            } else {
                t.surface.clone()
            }
        })
        .collect();
    words.join(" ")
}

fn occurrence_evidence(corpus: &AnnotatedCorpus, occ: &Occurrence) -> Evidence {
    Evidence {
        role: "occurrence".to_owned(),
        id: occ.instance_id.clone(),
        sentence_id: occ.sentence_id.clone(),
        text: corpus
            .instance_by_id(&occ.instance_id)
            .map(|i| sentence_text(corpus, i))
            .unwrap_or_default(),
        keys: occ.gold_keys.clone(),
        homonym: Some(occ.homonym_id.clone()),
    }
}

fn exception(
    hypothesis: Hypothesis,
    key: String,
    word: &Word,
    homonyms: &BTreeSet<String>,
    evidence: Vec<Evidence>,
) -> ExceptionRecord {
    ExceptionRecord {
        hypothesis,
        key,
        word: word.to_string(),
        homonyms: homonyms.iter().cloned().collect(),
        status: ExceptionStatus::Unadjudicated,
        category: None,
        note: String::new(),
        evidence,
    }
}

fn finish(
    hypothesis: Hypothesis,
    corpus_name: &str,
    instances: u64,
    mut exceptions: Vec<ExceptionRecord>,
    records: &[AdjudicationRecord],
    details: serde_json::Value,
    notes: Vec<String>,
) -> Result<RunReport> {
    exceptions.sort_by(|a, b| a.key.cmp(&b.key));
    let apparent: Vec<String> = exceptions.iter().map(|e| e.key.clone()).collect();
    let (summary, adjudication) = adjudicate_summary(hypothesis, corpus_name, instances, &apparent, records)?;
    mark_exceptions(&mut exceptions, &adjudication, records);
    Ok(RunReport {
        format_version: FORMAT_VERSION,
        summary,
        adjudication,
        exceptions,
        details,
        notes,
    })
}

fn corpus_details(loaded: &LoadedCorpus) -> serde_json::Value {
    let d = &loaded.diagnostics;
    json!({
        "stats": loaded.corpus.stats(),
        "instances_without_gold": d.instances_without_gold.len(),
        "gold_for_unknown_instances": d.gold_for_unknown_instances.len(),
        "bad_gold_keys": d.bad_gold_keys,
        "gold_lemma_mismatches": d.gold_lemma_mismatches,
        "id_map": loaded.id_map.as_ref().map(|o| json!({
            "renamed": o.renamed.len(),
            "excluded": o.excluded,
        })),
    })
}

fn sense_map_details(map: &SenseMap) -> serde_json::Value {
    let counts: BTreeMap<&str, usize> = map
        .exclusion_counts()
        .into_iter()
        .map(|(r, n)| (r.as_str(), n))
        .collect();
    json!({ "mapped": map.len(), "excluded": counts })
}

/// Human-readable warnings about the loaded inputs.
pub fn input_notes(loaded: Option<&LoadedCorpus>, map: Option<&SenseMap>) -> Vec<String> {
    let mut notes = Vec::new();
    if let Some(l) = loaded {
        let d = &l.diagnostics;
        if !d.instances_without_gold.is_empty() {
            notes.push(format!(
                "{} instances without gold keys dropped",
                d.instances_without_gold.len()
            ));
        }
        if !d.gold_for_unknown_instances.is_empty() {
            notes.push(format!(
                "{} gold lines for unknown instances ignored",
                d.gold_for_unknown_instances.len()
            ));
        }
        if !d.bad_gold_keys.is_empty() {
            notes.push(format!("{} malformed gold keys dropped", d.bad_gold_keys.len()));
        }
        if !d.gold_lemma_mismatches.is_empty() {
            notes.push(format!(
                "{} instances have a gold key for another lemma; instance lemma kept",
                d.gold_lemma_mismatches.len()
            ));
        }
        if let Some(o) = &l.id_map {
            if !o.excluded.is_empty() {
                notes.push(format!("{} gold keys excluded by the id map", o.excluded.len()));
            }
        }
    }
    if let Some(m) = map {
        if !m.excluded().is_empty() {
            let parts: Vec<String> = m
                .exclusion_counts()
                .into_iter()
                .map(|(r, n)| format!("{n} {}", r.as_str()))
                .collect();
            notes.push(format!(
                "sense map: {} keys mapped, {} rows excluded ({})",
                m.len(),
                m.excluded().len(),
                parts.join(", ")
            ));
        }
    }
    notes
}

fn skipped_notes(unmapped: usize, data_errors: usize) -> Vec<String> {
    let mut notes = Vec::new();
    if unmapped > 0 {
        notes.push(format!("{unmapped} instances skipped: gold keys not in the sense map"));
    }
    if data_errors > 0 {
        notes.push(format!(
            "{data_errors} instances skipped as data errors (gold keys of several homonyms)"
        ));
    }
    notes
}

pub fn ohpt_exceptions(corpus: &AnnotatedCorpus, report: &OhptReport) -> Vec<ExceptionRecord> {
    report
        .exceptions()
        .map(|i| {
            exception(
                Hypothesis::Ohpt,
                i.key(),
                &i.word,
                &i.homonym_ids,
                i.occurrences.iter().map(|o| occurrence_evidence(corpus, o)).collect(),
            )
        })
        .collect()
}

pub fn run_ohpt(
    corpus_name: &str,
    loaded: &LoadedCorpus,
    alignments: &AlignmentSet,
    sense_map: &SenseMap,
    lexicon: &Lexicon,
    records: &[AdjudicationRecord],
) -> Result<RunReport> {
    let corpus = &loaded.corpus;
    let report = parallel::with_pool(|| parallel::check_ohpt(corpus, alignments, sense_map, lexicon))?;
    let sets = ohpt::extract_translation_sets(corpus, alignments, sense_map, lexicon);
    let mut consistent_words: BTreeMap<&Word, bool> = BTreeMap::new();
    for i in &report.instances {
        *consistent_words.entry(&i.word).or_insert(true) &= i.consistent;
    }
    let per_word: Vec<_> = sets
        .per_word
        .iter()
        .map(|(w, s)| {
            json!({
                "word": w,
                "translation_sets": s,
                "disjoint": ohpt::pairwise_disjoint(s),
                "consistent": consistent_words.get(w).copied().unwrap_or(true),
            })
        })
        .collect();
    let fan_out = alignments
        .by_instance()
        .values()
        .filter(|t| {
            let distinct: BTreeSet<&&str> = t.iter().collect();
            distinct.len() > 1
        })
        .count();
    let mut notes = input_notes(Some(loaded), Some(sense_map));
    if !alignments.dropped().is_empty() {
        notes.push(format!(
            "{} alignment links to unknown instances dropped",
            alignments.dropped().len()
        ));
    }
    if fan_out > 0 {
        notes.push(format!(
            "{fan_out} aligned instances fan out to several target lemmas; each word/target pair counts once"
        ));
    }
    notes.extend(skipped_notes(
        report.skipped.unmapped.len(),
        report.skipped.data_errors.len(),
    ));
    let details = json!({
        "corpus": corpus_details(loaded),
        "sense_map": sense_map_details(sense_map),
        "alignments": { "links": alignments.len(), "dropped": alignments.dropped(), "fan_out_instances": fan_out },
        "raw": report.summary,
        "skipped": report.skipped,
        "words": per_word,
        "instances": report.instances,
    });
    finish(
        Hypothesis::Ohpt,
        corpus_name,
        report.summary.instances,
        ohpt_exceptions(corpus, &report),
        records,
        details,
        notes,
    )
}

pub fn ohpd_exceptions(corpus: &AnnotatedCorpus, report: &OhpdReport) -> Vec<ExceptionRecord> {
    report
        .exceptions()
        .map(|i| {
            exception(
                Hypothesis::Ohpd,
                i.key(),
                &i.word,
                &i.homonym_ids,
                i.occurrences.iter().map(|o| occurrence_evidence(corpus, o)).collect(),
            )
        })
        .collect()
}

pub fn run_ohpd(
    corpus_name: &str,
    loaded: &LoadedCorpus,
    sense_map: &SenseMap,
    lexicon: &Lexicon,
    records: &[AdjudicationRecord],
) -> Result<RunReport> {
    let corpus = &loaded.corpus;
    let report = parallel::with_pool(|| parallel::check_ohpd(corpus, sense_map, lexicon))?;
    let mut notes = input_notes(Some(loaded), Some(sense_map));
    notes.extend(skipped_notes(
        report.skipped.unmapped.len(),
        report.skipped.data_errors.len(),
    ));
    let documents = corpus.documents().len();
    let participating: usize = report.instances.iter().map(|i| i.occurrences.len()).sum();
    let details = json!({
        "corpus": corpus_details(loaded),
        "sense_map": sense_map_details(sense_map),
        "raw": report.summary,
        "documents": documents,
        "mean_instances_per_document": if documents == 0 { 0.0 } else { corpus.instances().len() as f64 / documents as f64 },
        "participating_occurrences": participating,
        "skipped": report.skipped,
        "instances": report.instances,
    });
    finish(
        Hypothesis::Ohpd,
        corpus_name,
        report.summary.instances,
        ohpd_exceptions(corpus, &report),
        records,
        details,
        notes,
    )
}

pub fn ohpc_exceptions(test: &AnnotatedCorpus, report: &OhpcReport) -> Vec<ExceptionRecord> {
    report
        .errors()
        .map(|p| {
            let mut homonyms: BTreeSet<String> = BTreeSet::new();
            homonyms.insert(p.gold_homonym.clone());
            homonyms.extend(p.predicted_homonym.clone());
            let inst = test.instance_by_id(&p.instance_id);
            let evidence = vec![
                Evidence {
                    role: "gold".to_owned(),
                    id: p.instance_id.clone(),
                    sentence_id: inst.map(|i| i.sentence_id.clone()).unwrap_or_default(),
                    text: inst.map(|i| sentence_text(test, i)).unwrap_or_default(),
                    keys: p.gold_keys.clone(),
                    homonym: Some(p.gold_homonym.clone()),
                },
                Evidence {
                    role: "predicted".to_owned(),
                    id: p.predicted_sense.clone(),
                    sentence_id: String::new(),
                    text: String::new(),
                    keys: vec![p.predicted_sense.clone()],
                    homonym: p.predicted_homonym.clone(),
                },
            ];
            exception(Hypothesis::Ohpc, p.instance_id.clone(), &p.word, &homonyms, evidence)
        })
        .collect()
}

pub fn run_ohpc_eval(
    corpus_name: &str,
    models: &Models,
    loaded: &LoadedCorpus,
    sense_map: &SenseMap,
    lexicon: &Lexicon,
    records: &[AdjudicationRecord],
) -> Result<RunReport> {
    let test = &loaded.corpus;
    let report = parallel::with_pool(|| parallel::evaluate(models, test, sense_map, lexicon))?;
    let mut notes = input_notes(Some(loaded), Some(sense_map));
    if !report.skipped_unmodeled.is_empty() {
        notes.push(format!(
            "{} of {} test instances skipped: word has no training data",
            report.skipped_unmodeled.len(),
            report.attempted()
        ));
    }
    notes.extend(skipped_notes(
        report.skipped.unmapped.len(),
        report.skipped.data_errors.len(),
    ));
    let unmodeled_words: BTreeSet<String> = report
        .skipped_unmodeled
        .iter()
        .filter_map(|id| test.instance_by_id(id))
        .map(|i| i.word().to_string())
        .collect();
    let details = json!({
        "corpus": corpus_details(loaded),
        "sense_map": sense_map_details(sense_map),
        "models": models.len(),
        "attempted": report.attempted(),
        "scored": report.predictions.len(),
        "skipped_unmodeled": report.skipped_unmodeled,
        "unmodeled_words": unmodeled_words,
        "skipped": report.skipped,
        "sense_correct": report.sense_correct,
        "homonym_correct": report.homonym_correct,
        "sense_accuracy": report.sense_accuracy,
        "homonym_accuracy": report.homonym_accuracy,
        "predictions": report.predictions,
    });
    finish(
        Hypothesis::Ohpc,
        corpus_name,
        report.summary.instances,
        ohpc_exceptions(test, &report),
        records,
        details,
        notes,
    )
}

pub fn ohpsc_exceptions(report: &OhpscReport) -> Vec<ExceptionRecord> {
    report
        .exceptions()
        .map(|v| {
            let mut evidence: Vec<Evidence> = v
                .checked_keys
                .iter()
                .map(|(k, h)| Evidence {
                    role: "key".to_owned(),
                    id: k.as_str().to_owned(),
                    sentence_id: String::new(),
                    text: String::new(),
                    keys: vec![k.as_str().to_owned()],
                    homonym: Some(h.clone()),
                })
                .collect();
            evidence.extend(v.unchecked_keys.iter().map(|k| Evidence {
                role: "unchecked".to_owned(),
                id: k.as_str().to_owned(),
                sentence_id: String::new(),
                text: String::new(),
                keys: vec![k.as_str().to_owned()],
                homonym: None,
            }));
            exception(
                Hypothesis::Ohpsc,
                v.cluster_id.clone(),
                &v.word,
                &v.homonym_ids,
                evidence,
            )
        })
        .collect()
}

pub fn run_ohpsc(
    corpus_name: &str,
    clustering: &SenseClustering,
    sense_map: &SenseMap,
    lexicon: &Lexicon,
    records: &[AdjudicationRecord],
) -> Result<RunReport> {
    let report = parallel::with_pool(|| parallel::check_ohpsc(clustering, sense_map, lexicon))?;
    let mut notes = input_notes(None, Some(sense_map));
    if !report.excluded_clusters.is_empty() {
        notes.push(format!(
            "{} clusters excluded: word is not homonymous in the resource",
            report.excluded_clusters.len()
        ));
    }
    if report.unverifiable > 0 {
        notes.push(format!(
            "{} clusters unverifiable: none of their keys is in the sense map",
            report.unverifiable
        ));
    }
    let unverifiable: Vec<&str> = report
        .verdicts
        .iter()
        .filter(|v| v.status == ClusterStatus::Unverifiable)
        .map(|v| v.cluster_id.as_str())
        .collect();
    let senses: usize = report
        .verdicts
        .iter()
        .filter(|v| v.status != ClusterStatus::Unverifiable)
        .map(|v| v.checked_keys.len() + v.unchecked_keys.len())
        .sum();
    let words: BTreeSet<&Word> = report.verdicts.iter().map(|v| &v.word).collect();
    let details = json!({
        "sense_map": sense_map_details(sense_map),
        "clusters_total": clustering.len(),
        "raw": report.summary,
        "words": words.len(),
        "senses": senses,
        "excluded_clusters": report.excluded_clusters,
        "unverifiable_clusters": unverifiable,
        "verdicts": report.verdicts,
    });
    finish(
        Hypothesis::Ohpsc,
        corpus_name,
        report.summary.instances,
        ohpsc_exceptions(&report),
        records,
        details,
        notes,
    )
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

/// Why evaluating `clusters` would be circular, if it would: the file is
/// byte-identical to the clustering the sense map came from, or the sense
/// map declares it as its provenance.
pub fn circularity(clusters: &[u8], map_file: &SenseMapFile, map_source: Option<&[u8]>) -> Option<String> {
    let digest = sha256_hex(clusters);
    if map_file.provenance_sha256.contains(&digest) {
        return Some("the sense map declares this clustering as its provenance".to_owned());
    }
    if map_source == Some(clusters) {
        return Some("the clustering is byte-identical to the sense map's source".to_owned());
    }
    None
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MergedGroup {
    pub keys: Vec<String>,
    /// Homonyms of the mapped keys; empty without a sense map.
    pub homonyms: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MergedWord {
    pub word: Word,
    pub groups: Vec<MergedGroup>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MergeReport {
    pub format_version: u32,
    pub min_shared: usize,
    pub words: Vec<MergedWord>,
    pub groups: usize,
    /// Groups whose mapped keys belong to more than one homonym.
    pub crossing_groups: usize,
}

impl MergeReport {
    pub fn to_text(&self) -> String {
        let mut out = format!(
            "{} words, {} groups, {} crossing homonyms (min shared translations: {})\n",
            self.words.len(),
            self.groups,
            self.crossing_groups,
            self.min_shared
        );
        for w in &self.words {
            let _ = writeln!(out, "{}", w.word);
            for g in &w.groups {
                let _ = write!(out, "  {}", g.keys.join(" "));
                if !g.homonyms.is_empty() {
                    let _ = write!(out, " -> {}", g.homonyms.join(", "));
                }
                out.push('\n');
            }
        }
        out
    }
}

/// Merges senses by shared translations for `words` and annotates each group
/// with the homonyms of its keys when a sense map is given.
pub fn run_merge<'w>(
    corpus: &AnnotatedCorpus,
    alignments: &AlignmentSet,
    words: impl IntoIterator<Item = &'w Word>,
    min_shared: usize,
    sense_map: Option<&SenseMap>,
) -> (MergeReport, DerivedClustering) {
    let derived = DerivedClustering::build(corpus, alignments, words, min_shared);
    let mut crossing = 0;
    let mut total = 0;
    let words = derived
        .entries
        .iter()
        .map(|e| MergedWord {
            word: e.word.clone(),
            groups: e
                .groups
                .iter()
                .map(|g| {
                    let homonyms: BTreeSet<String> = sense_map
                        .map(|m| {
                            g.iter()
                                .filter_map(|k| m.homonym_of(k.as_str()))
                                .map(str::to_owned)
                                .collect()
                        })
                        .unwrap_or_default();
                    total += 1;
                    if homonyms.len() > 1 {
                        crossing += 1;
                    }
                    MergedGroup {
                        keys: g.iter().map(|k| k.as_str().to_owned()).collect(),
                        homonyms: homonyms.into_iter().collect(),
                    }
                })
                .collect(),
        })
        .collect();
    (
        MergeReport {
            format_version: FORMAT_VERSION,
            min_shared: min_shared.max(1),
            words,
            groups: total,
            crossing_groups: crossing,
        },
        derived,
    )
}

/// Source of a sense grouping for the partitioning comparison.
pub enum Grouping<'a> {
    Homonyms(HomonymGrouping<'a>),
    Clusters(SenseClustering),
}

impl SenseGrouping for Grouping<'_> {
    fn group_of(&self, word: &Word, key: &str) -> Option<String> {
        match self {
            Grouping::Homonyms(g) => g.group_of(word, key),
            Grouping::Clusters(c) => c.group_of(word, key),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CompareReport {
    pub format_version: u32,
    #[serde(flatten)]
    pub comparison: PartitionComparison,
}

impl CompareReport {
    pub fn to_text(&self) -> String {
        let c = &self.comparison;
        let mut out = format!("seed {}, sample size {}\n", c.seed, c.sample_size);
        let _ = writeln!(
            out,
            "{:<12} {:>10} {:>8} {:>8} {:>11} {:>13} {:>12} {:>12}",
            "grouping", "candidates", "vacuous", "excluded", "partitioned", "pairs overlap", "shared", "tokens/group"
        );
        for side in [&c.a, &c.b] {
            let _ = writeln!(
                out,
                "{:<12} {:>10} {:>8} {:>8} {:>11} {:>13} {:>12} {:>12.1}",
                side.name,
                side.candidates,
                side.vacuous.len(),
                side.excluded,
                format!("{}/{}", side.partitioned, side.sampled.len()),
                side.pairs_with_overlap,
                side.overlapping_translations,
                side.mean_tokens_per_group
            );
        }
        let t = &c.table;
        let _ = writeln!(out, "table: ({}, {}; {}, {})", t.a, t.b, t.c, t.d);
        match &c.chi_squared {
            Some(chi) => {
                let flags: Vec<String> = CRITICAL_VALUES_DF1
                    .iter()
                    .zip(chi.significant)
                    .map(|((p, _), s)| format!("p<{p}: {}", if s { "yes" } else { "no" }))
                    .collect();
                let _ = writeln!(out, "chi-squared: {:.2} ({})", chi.statistic, flags.join(", "));
            }
            None => out.push_str("chi-squared: undefined (zero marginal)\n"),
        }
        for side in [&c.a, &c.b] {
            let _ = writeln!(out, "\n{} sample", side.name);
            for p in &side.sampled {
                let _ = write!(
                    out,
                    "  {} {} | {}: {}",
                    p.word,
                    if p.partitioned { "partitioned" } else { "overlap" },
                    p.groups[0],
                    p.translations[0].iter().cloned().collect::<Vec<_>>().join(",")
                );
                let _ = write!(
                    out,
                    " | {}: {}",
                    p.groups[1],
                    p.translations[1].iter().cloned().collect::<Vec<_>>().join(",")
                );
                if !p.shared.is_empty() {
                    let _ = write!(out, " | shared: {}", p.shared.join(","));
                }
                out.push('\n');
            }
        }
        out
    }
}

pub fn run_compare(
    a: (&str, &Grouping<'_>),
    b: (&str, &Grouping<'_>),
    corpus: &AnnotatedCorpus,
    alignments: &AlignmentSet,
    options: &CompareOptions,
) -> Result<CompareReport> {
    let comparison = ohpt::compare_partitioning(a.0, a.1, b.0, b.1, corpus, alignments, options)?;
    Ok(CompareReport {
        format_version: FORMAT_VERSION,
        comparison,
    })
}

/// Corpus label used in summaries: the file stem of `path`.
pub fn corpus_label(path: &Path) -> String {
    path.file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| "-".to_owned())
}

/// Reads every run report in `dir`, sorted by file name. Files that are not
/// run reports are skipped and named in the returned list.
pub fn collect_runs(dir: &Path) -> Result<(Vec<RunReport>, Vec<String>)> {
    let mut paths: Vec<_> = std::fs::read_dir(dir)
        .map_err(|e| Error::io(dir, e))?
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.extension().is_some_and(|x| x == "json"))
        .collect();
    paths.sort();
    let mut runs = Vec::new();
    let mut skipped = Vec::new();
    for p in paths {
        let text = std::fs::read_to_string(&p).map_err(|e| Error::io(&p, e))?;
        match serde_json::from_str::<RunReport>(&text) {
            Ok(r) => runs.push(r),
            Err(_) => skipped.push(p.display().to_string()),
        }
    }
    Ok((runs, skipped))
}
