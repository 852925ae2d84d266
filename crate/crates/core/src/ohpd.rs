//! One homonym per discourse.
//!
//! Each document is one discourse. An instance is a (word, document) pair;
//! it is consistent when all occurrences of the word in that document
//! represent the same homonym. A single occurrence is trivially consistent.

use alloc::borrow::ToOwned;
use alloc::collections::{BTreeMap, BTreeSet};
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

use crate::corpus::AnnotatedCorpus;
use crate::lexicon::{Lexicon, SenseMap, Word};
use crate::ohpt::{CheckSummary, Occurrence};
use crate::resolve::{resolve_or_skip, Skipped};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OhpdInstance {
    pub word: Word,
    pub document_id: String,
    /// In corpus order.
    pub occurrences: Vec<Occurrence>,
    pub homonym_ids: BTreeSet<String>,
    pub consistent: bool,
}

impl OhpdInstance {
    /// `lemma#pos#document_id`.
    pub fn key(&self) -> String {
        format!("{}#{}", self.word, self.document_id)
    }
}

/// Instances of one document, sorted by word.
pub fn check_document(
    corpus: &AnnotatedCorpus,
    doc: usize,
    sense_map: &SenseMap,
    lexicon: &Lexicon,
) -> (Vec<OhpdInstance>, Skipped) {
    let mut skipped = Skipped::default();
    let mut by_word: BTreeMap<Word, Vec<Occurrence>> = BTreeMap::new();
    for &i in corpus.document_instances(doc) {
        let inst = corpus.instance(i);
        if let Some(h) = resolve_or_skip(inst, sense_map, lexicon, &mut skipped) {
            by_word.entry(inst.word()).or_default().push(Occurrence {
                instance_id: inst.id.clone(),
                sentence_id: inst.sentence_id.clone(),
                homonym_id: h.to_owned(),
                gold_keys: inst.gold_keys.iter().map(|k| k.as_str().to_owned()).collect(),
            });
        }
    }
    let document_id = &corpus.documents()[doc].id;
    let instances = by_word
        .into_iter()
        .map(|(word, occurrences)| {
            let homonym_ids: BTreeSet<String> = occurrences.iter().map(|o| o.homonym_id.clone()).collect();
            OhpdInstance {
                word,
                document_id: document_id.clone(),
                consistent: homonym_ids.len() == 1,
                homonym_ids,
                occurrences,
            }
        })
        .collect();
    (instances, skipped)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct OhpdReport {
    /// Sorted by document id, then word.
    pub instances: Vec<OhpdInstance>,
    pub skipped: Skipped,
    pub summary: CheckSummary,
}

impl OhpdReport {
    /// Aggregates per-document results in any order.
    pub fn from_parts<I>(parts: I) -> Self
    where
        I: IntoIterator<Item = (Vec<OhpdInstance>, Skipped)>,
    {
        let mut instances = Vec::new();
        let mut skipped = Skipped::default();
        for (inst, skip) in parts {
            instances.extend(inst);
            skipped.absorb(skip);
        }
        instances.sort_by(|a, b| (&a.document_id, &a.word).cmp(&(&b.document_id, &b.word)));
        skipped.sort();
        let inconsistent = instances.iter().filter(|i| !i.consistent).count();
        OhpdReport {
            summary: CheckSummary::new(instances.len(), inconsistent),
            instances,
            skipped,
        }
    }

    pub fn exceptions(&self) -> impl Iterator<Item = &OhpdInstance> {
        self.instances.iter().filter(|i| !i.consistent)
    }
}

pub fn check_ohpd(corpus: &AnnotatedCorpus, sense_map: &SenseMap, lexicon: &Lexicon) -> OhpdReport {
    OhpdReport::from_parts((0..corpus.documents().len()).map(|d| check_document(corpus, d, sense_map, lexicon)))
}
