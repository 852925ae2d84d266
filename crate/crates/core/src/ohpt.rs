//! One homonym per translation.
//!
//! An instance of the check is a (word, target lemma) pair observed in a
//! word-aligned bitext. It is consistent when every aligned occurrence
//! behind it represents the same homonym. Equivalently, per word, the
//! translation sets of its homonyms are pairwise disjoint.
//!
//! The module also merges senses that share translations into coarse
//! groups, and compares how often two sense groupings (homonyms versus
//! some other clustering) keep their translation sets apart.

use alloc::borrow::ToOwned;
use alloc::collections::{BTreeMap, BTreeSet};
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::corpus::{AlignmentSet, AnnotatedCorpus, SenseCluster, SenseClustering};
use crate::lexicon::{Lexicon, SenseKey, SenseMap, Word};
use crate::resolve::{resolve_or_skip, Skipped};
use crate::stats::{ChiSquared, ContingencyTable2x2};
use crate::union_find::UnionFind;

/// Translations observed for one homonym, with occurrence counts.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TranslationSet {
    pub homonym_id: String,
    pub translations: BTreeMap<String, usize>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct TranslationSets {
    pub per_word: BTreeMap<Word, Vec<TranslationSet>>,
    pub skipped: Skipped,
}

/// An aligned occurrence of a homonymous word.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Occurrence {
    pub instance_id: String,
    pub sentence_id: String,
    pub homonym_id: String,
    pub gold_keys: Vec<String>,
}

/// Participating aligned instances of one word.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WordOccurrences {
    pub word: Word,
    /// (occurrence, normalized targets), in corpus order.
    pub aligned: Vec<(Occurrence, Vec<String>)>,
}

/// Collects aligned instances of homonymous words with mapped gold keys,
/// grouped by word.
pub fn collect_occurrences(
    corpus: &AnnotatedCorpus,
    alignments: &AlignmentSet,
    sense_map: &SenseMap,
    lexicon: &Lexicon,
) -> (Vec<WordOccurrences>, Skipped) {
    let mut skipped = Skipped::default();
    let mut by_word: BTreeMap<Word, Vec<(Occurrence, Vec<String>)>> = BTreeMap::new();
    for (index, targets) in alignments.by_instance() {
        let inst = corpus.instance(index);
        if let Some(h) = resolve_or_skip(inst, sense_map, lexicon, &mut skipped) {
            let occ = Occurrence {
                instance_id: inst.id.clone(),
                sentence_id: inst.sentence_id.clone(),
                homonym_id: h.to_owned(),
                gold_keys: inst.gold_keys.iter().map(|k| k.as_str().to_owned()).collect(),
            };
            let mut targets: Vec<String> = targets.into_iter().map(str::to_owned).collect();
            targets.sort();
            targets.dedup();
            by_word.entry(inst.word()).or_default().push((occ, targets));
        }
    }
    skipped.sort();
    let words = by_word
        .into_iter()
        .map(|(word, aligned)| WordOccurrences { word, aligned })
        .collect();
    (words, skipped)
}

impl WordOccurrences {
    /// One translation set per homonym with at least one aligned occurrence.
    pub fn translation_sets(&self) -> Vec<TranslationSet> {
        let mut sets: BTreeMap<&str, BTreeMap<String, usize>> = BTreeMap::new();
        for (occ, targets) in &self.aligned {
            let set = sets.entry(&occ.homonym_id).or_default();
            for t in targets {
                *set.entry(t.clone()).or_insert(0) += 1;
            }
        }
        sets.into_iter()
            .map(|(h, translations)| TranslationSet {
                homonym_id: h.to_owned(),
                translations,
            })
            .collect()
    }

    /// One instance per distinct target lemma, sorted by target.
    pub fn check(&self) -> Vec<OhptInstance> {
        let mut pairs: BTreeMap<&str, Vec<&Occurrence>> = BTreeMap::new();
        for (occ, targets) in &self.aligned {
            for t in targets {
                pairs.entry(t).or_default().push(occ);
            }
        }
        pairs
            .into_iter()
            .map(|(target, occs)| {
                let mut occurrences: Vec<Occurrence> = occs.into_iter().cloned().collect();
                occurrences.sort();
                occurrences.dedup();
                OhptInstance::new(self.word.clone(), target.to_owned(), occurrences)
            })
            .collect()
    }
}

pub fn extract_translation_sets(
    corpus: &AnnotatedCorpus,
    alignments: &AlignmentSet,
    sense_map: &SenseMap,
    lexicon: &Lexicon,
) -> TranslationSets {
    let (words, skipped) = collect_occurrences(corpus, alignments, sense_map, lexicon);
    TranslationSets {
        per_word: words.iter().map(|w| (w.word.clone(), w.translation_sets())).collect(),
        skipped,
    }
}

/// Whether no target lemma is shared by two of the sets.
pub fn pairwise_disjoint(sets: &[TranslationSet]) -> bool {
    for (i, a) in sets.iter().enumerate() {
        for b in &sets[i + 1..] {
            if a.translations.keys().any(|t| b.translations.contains_key(t)) {
                return false;
            }
        }
    }
    true
}

/// A (word, target lemma) pair.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OhptInstance {
    pub word: Word,
    pub target_lemma: String,
    pub occurrences: Vec<Occurrence>,
    pub homonym_ids: BTreeSet<String>,
    pub consistent: bool,
}

impl OhptInstance {
    pub fn new(word: Word, target_lemma: String, occurrences: Vec<Occurrence>) -> Self {
        let homonym_ids: BTreeSet<String> = occurrences.iter().map(|o| o.homonym_id.clone()).collect();
        let consistent = homonym_ids.len() == 1;
        OhptInstance {
            word,
            target_lemma,
            occurrences,
            homonym_ids,
            consistent,
        }
    }

    /// `lemma#pos#target_lemma`.
    pub fn key(&self) -> String {
        format!("{}#{}", self.word, self.target_lemma)
    }
}

/// Raw counts of a checker run, before adjudication.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct CheckSummary {
    pub instances: u64,
    pub inconsistent: u64,
    pub support_pct: f64,
}

impl CheckSummary {
    pub fn new(instances: usize, inconsistent: usize) -> Self {
        CheckSummary {
            instances: instances as u64,
            inconsistent: inconsistent as u64,
            support_pct: crate::stats::support_pct(instances as u64, inconsistent as u64),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct OhptReport {
    /// Sorted by word, then target lemma.
    pub instances: Vec<OhptInstance>,
    pub skipped: Skipped,
    pub summary: CheckSummary,
}

impl OhptReport {
    pub fn from_instances(mut instances: Vec<OhptInstance>, skipped: Skipped) -> Self {
        instances.sort_by(|a, b| (&a.word, &a.target_lemma).cmp(&(&b.word, &b.target_lemma)));
        let inconsistent = instances.iter().filter(|i| !i.consistent).count();
        OhptReport {
            summary: CheckSummary::new(instances.len(), inconsistent),
            instances,
            skipped,
        }
    }

    pub fn exceptions(&self) -> impl Iterator<Item = &OhptInstance> {
        self.instances.iter().filter(|i| !i.consistent)
    }
}

pub fn check_ohpt(
    corpus: &AnnotatedCorpus,
    alignments: &AlignmentSet,
    sense_map: &SenseMap,
    lexicon: &Lexicon,
) -> OhptReport {
    let (words, skipped) = collect_occurrences(corpus, alignments, sense_map, lexicon);
    let instances = words.iter().flat_map(WordOccurrences::check).collect();
    OhptReport::from_instances(instances, skipped)
}

/// A partition of a word's aligned senses.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SenseGroups {
    pub word: Word,
    /// Disjoint, sorted by smallest key.
    pub groups: Vec<BTreeSet<SenseKey>>,
}

/// Merges senses of `word` that share at least `min_shared` distinct
/// translations, closing transitively.
///
/// Senses are the gold keys of the word's aligned instances. An instance
/// carrying several keys contributes its translations to each of them.
pub fn merge_senses_by_translation(
    corpus: &AnnotatedCorpus,
    alignments: &AlignmentSet,
    word: &Word,
    min_shared: usize,
) -> SenseGroups {
    let min_shared = min_shared.max(1);
    let by_instance = alignments.by_instance();
    let mut translations: BTreeMap<&SenseKey, BTreeSet<&str>> = BTreeMap::new();
    for &i in corpus.instances_of(word) {
        if let Some(targets) = by_instance.get(&i) {
            for key in &corpus.instance(i).gold_keys {
                translations.entry(key).or_default().extend(targets.iter().copied());
            }
        }
    }
    let senses: Vec<(&SenseKey, BTreeSet<&str>)> = translations.into_iter().collect();
    let mut uf = UnionFind::new(senses.len());
    for i in 0..senses.len() {
        for j in i + 1..senses.len() {
            if senses[i].1.intersection(&senses[j].1).count() >= min_shared {
                uf.union(i, j);
            }
        }
    }
    SenseGroups {
        word: word.clone(),
        groups: uf
            .groups()
            .into_iter()
            .map(|g| g.into_iter().map(|i| senses[i].0.clone()).collect())
            .collect(),
    }
}

/// Translation-derived groupings for many words.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct DerivedClustering {
    pub entries: Vec<SenseGroups>,
}

impl DerivedClustering {
    pub fn build<'w, I>(corpus: &AnnotatedCorpus, alignments: &AlignmentSet, words: I, min_shared: usize) -> Self
    where
        I: IntoIterator<Item = &'w Word>,
    {
        let mut entries: Vec<SenseGroups> = words
            .into_iter()
            .map(|w| merge_senses_by_translation(corpus, alignments, w, min_shared))
            .filter(|g| !g.groups.is_empty())
            .collect();
        entries.sort_by(|a, b| a.word.cmp(&b.word));
        DerivedClustering { entries }
    }

    /// As a clustering with ids `lemma#pos#N`.
    pub fn to_clustering(&self) -> SenseClustering {
        let clusters = self
            .entries
            .iter()
            .flat_map(|e| {
                e.groups.iter().enumerate().map(|(i, g)| SenseCluster {
                    id: format!("{}#{}", e.word, i + 1),
                    word: e.word.clone(),
                    keys: g.clone(),
                })
            })
            .collect();
        SenseClustering::from_clusters(clusters).expect("derived groups are disjoint")
    }
}

/// Assigns a word's senses to groups (homonyms, clusters, ...).
pub trait SenseGrouping {
    fn group_of(&self, word: &Word, key: &str) -> Option<String>;
}

/// Groups senses by the homonym the sense map assigns them.
pub struct HomonymGrouping<'a> {
    pub sense_map: &'a SenseMap,
    pub lexicon: &'a Lexicon,
}

impl SenseGrouping for HomonymGrouping<'_> {
    fn group_of(&self, word: &Word, key: &str) -> Option<String> {
        let h = self.sense_map.homonym_of(key)?;
        (self.lexicon.is_homonymous(word) && self.lexicon.represents(word, h)).then(|| h.to_owned())
    }
}

impl SenseGrouping for SenseClustering {
    fn group_of(&self, word: &Word, key: &str) -> Option<String> {
        self.cluster_of(word, key).map(|c| c.id.clone())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PartitionError {
    TooFewCandidates {
        side: String,
        available: usize,
        requested: usize,
    },
}

impl fmt::Display for PartitionError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PartitionError::TooFewCandidates {
                side,
                available,
                requested,
            } => write!(
                f,
                "grouping {side}: {available} candidate words available, {requested} requested"
            ),
        }
    }
}

#[cfg(feature = "std")]
impl std::error::Error for PartitionError {}

/// A candidate word: its senses fall into exactly two groups.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GroupPair {
    pub word: Word,
    pub groups: [String; 2],
    /// Annotated tokens per group.
    pub tokens: [usize; 2],
    pub translations: [BTreeSet<String>; 2],
    /// Targets found in both translation sets.
    pub shared: Vec<String>,
    pub partitioned: bool,
}

/// Candidate words of one grouping and the sampled outcome.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PartitionSide {
    pub name: String,
    pub candidates: usize,
    /// Words with two groups where one group has no aligned occurrence.
    /// They cannot overlap, so they are kept out of sampling.
    pub vacuous: Vec<Word>,
    /// Two-group words removed by the exclusion list.
    pub excluded: usize,
    pub sampled: Vec<GroupPair>,
    pub partitioned: usize,
    pub overlapping_translations: usize,
    pub pairs_with_overlap: usize,
    pub mean_tokens_per_group: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PartitionComparison {
    pub seed: u64,
    pub sample_size: usize,
    pub a: PartitionSide,
    pub b: PartitionSide,
    /// Rows: grouping A, grouping B. Columns: partitioned, not partitioned.
    pub table: ContingencyTable2x2,
    /// `None` when a marginal is zero.
    pub chi_squared: Option<ChiSquared>,
}

#[derive(Clone, Debug, Default)]
pub struct CompareOptions {
    pub sample_size: usize,
    pub seed: u64,
    pub yates: bool,
    /// Words never sampled from grouping B.
    pub exclude_from_b: BTreeSet<Word>,
}

/// Two-group words under `grouping`, sorted by word. Returns candidates
/// and vacuous words.
pub fn two_group_words<G: SenseGrouping + ?Sized>(
    grouping: &G,
    corpus: &AnnotatedCorpus,
    alignments: &AlignmentSet,
) -> (Vec<GroupPair>, Vec<Word>) {
    let by_instance = alignments.by_instance();
    let mut candidates = Vec::new();
    let mut vacuous = Vec::new();
    for (word, indices) in corpus.words() {
        let mut groups: BTreeMap<String, (usize, BTreeSet<String>)> = BTreeMap::new();
        for &i in indices {
            let inst = corpus.instance(i);
            let mut gs: Vec<String> = inst
                .gold_keys
                .iter()
                .filter_map(|k| grouping.group_of(word, k.as_str()))
                .collect();
            gs.sort();
            gs.dedup();
            // tokens whose keys straddle groups say nothing about either
            if let [g] = gs.as_slice() {
                let slot = groups.entry(g.clone()).or_default();
                slot.0 += 1;
                if let Some(ts) = by_instance.get(&i) {
                    slot.1.extend(ts.iter().map(|t| (*t).to_owned()));
                }
            }
        }
        if groups.len() != 2 {
            continue;
        }
        let mut it = groups.into_iter();
        let (g0, (n0, t0)) = it.next().expect("two groups");
        let (g1, (n1, t1)) = it.next().expect("two groups");
        if t0.is_empty() || t1.is_empty() {
            vacuous.push(word.clone());
            continue;
        }
        let shared: Vec<String> = t0.intersection(&t1).cloned().collect();
        candidates.push(GroupPair {
            word: word.clone(),
            groups: [g0, g1],
            tokens: [n0, n1],
            partitioned: shared.is_empty(),
            translations: [t0, t1],
            shared,
        });
    }
    (candidates, vacuous)
}

fn sample_side(
    name: &str,
    mut candidates: Vec<GroupPair>,
    vacuous: Vec<Word>,
    exclude: &BTreeSet<Word>,
    sample_size: usize,
    rng: &mut ChaCha8Rng,
) -> Result<PartitionSide, PartitionError> {
    let before = candidates.len();
    candidates.retain(|c| !exclude.contains(&c.word));
    let excluded = before - candidates.len();
    if candidates.len() < sample_size {
        return Err(PartitionError::TooFewCandidates {
            side: name.to_owned(),
            available: candidates.len(),
            requested: sample_size,
        });
    }
    let mut picks = rand::seq::index::sample(rng, candidates.len(), sample_size).into_vec();
    picks.sort_unstable();
    let available = candidates.len();
    let mut slots: Vec<Option<GroupPair>> = candidates.into_iter().map(Some).collect();
    let sampled: Vec<GroupPair> = picks.into_iter().filter_map(|i| slots[i].take()).collect();
    let partitioned = sampled.iter().filter(|p| p.partitioned).count();
    let overlapping_translations = sampled.iter().map(|p| p.shared.len()).sum();
    let pairs_with_overlap = sampled.iter().filter(|p| !p.partitioned).count();
    let tokens: usize = sampled.iter().map(|p| p.tokens[0] + p.tokens[1]).sum();
    let mean_tokens_per_group = if sampled.is_empty() {
        0.0
    } else {
        tokens as f64 / (2 * sampled.len()) as f64
    };
    Ok(PartitionSide {
        name: name.to_owned(),
        candidates: available,
        vacuous,
        excluded,
        sampled,
        partitioned,
        overlapping_translations,
        pairs_with_overlap,
        mean_tokens_per_group,
    })
}

/// Samples two-group words from each grouping and tests whether grouping A
/// keeps translation sets apart more often than grouping B.
///
/// Candidates are sorted by word before sampling with a ChaCha8 generator
/// seeded from `options.seed`, A first then B from the same stream.
pub fn compare_partitioning<A, B>(
    name_a: &str,
    grouping_a: &A,
    name_b: &str,
    grouping_b: &B,
    corpus: &AnnotatedCorpus,
    alignments: &AlignmentSet,
    options: &CompareOptions,
) -> Result<PartitionComparison, PartitionError>
where
    A: SenseGrouping + ?Sized,
    B: SenseGrouping + ?Sized,
{
    let mut rng = ChaCha8Rng::seed_from_u64(options.seed);
    let (cand_a, vac_a) = two_group_words(grouping_a, corpus, alignments);
    let (cand_b, vac_b) = two_group_words(grouping_b, corpus, alignments);
    let a = sample_side(name_a, cand_a, vac_a, &BTreeSet::new(), options.sample_size, &mut rng)?;
    let b = sample_side(
        name_b,
        cand_b,
        vac_b,
        &options.exclude_from_b,
        options.sample_size,
        &mut rng,
    )?;
    let table = ContingencyTable2x2::new(
        a.partitioned as u64,
        (a.sampled.len() - a.partitioned) as u64,
        b.partitioned as u64,
        (b.sampled.len() - b.partitioned) as u64,
    );
    Ok(PartitionComparison {
        seed: options.seed,
        sample_size: options.sample_size,
        chi_squared: table.chi_squared(options.yates).ok(),
        table,
        a,
        b,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::tests::tok;
    use crate::corpus::{RawDocument, RawSentence};
    use crate::lexicon::{HomonymEntry, Pos, SenseMapRow};
    use alloc::string::ToString;
    use alloc::vec;

    fn entry(id: &str, lemma: &str) -> HomonymEntry {
        HomonymEntry {
            homonym_id: id.into(),
            lemma: lemma.into(),
            pos_set: [Pos::Noun].into_iter().collect(),
            origin_language: String::new(),
            origin_form: String::new(),
            gloss: String::new(),
            translation_hint: String::new(),
        }
    }

    /// Builds a one-document corpus of single-token sentences. Each row is
    /// (lemma, gold key, targets).
    fn bitext(rows: &[(&str, &str, &[&str])]) -> (AnnotatedCorpus, AlignmentSet) {
        let mut sentences = Vec::new();
        let mut gold = BTreeMap::new();
        let mut links = Vec::new();
        for (i, (lemma, key, targets)) in rows.iter().enumerate() {
            let sid = format!("d000.s{i:03}");
            let tid = format!("{sid}.t000");
            gold.insert(tid.clone(), vec![key.to_string()]);
            for t in targets.iter() {
                links.push((tid.clone(), t.to_string()));
            }
            sentences.push(RawSentence {
                id: sid,
                tokens: vec![tok(lemma, "NOUN", Some(&tid))],
            });
        }
        let (c, _) = AnnotatedCorpus::assemble(
            vec![RawDocument {
                id: "d000".into(),
                sentences,
            }],
            &gold,
        )
        .unwrap();
        let a = AlignmentSet::build(links, &c);
        (c, a)
    }

    fn yard_world() -> (Lexicon, SenseMap) {
        let lex = Lexicon::from_entries(vec![
            entry("yard_1", "yard"),
            entry("yard_2", "yard"),
            entry("band_1", "band"),
            entry("band_2", "band"),
            entry("game_1", "game"),
            entry("game_2", "game"),
        ])
        .unwrap();
        let rows = [
            ("yard%1:23:00::", "yard_1"),
            ("yard%1:15:00::", "yard_2"),
            ("yard%1:15:01::", "yard_2"),
            ("band%1:06:00::", "band_1"),
            ("band%1:14:00::", "band_2"),
            ("game%1:04:00::", "game_1"),
            ("game%1:04:01::", "game_1"),
            ("game%1:04:02::", "game_1"),
        ];
        let map = SenseMap::build(
            rows.iter().enumerate().map(|(i, (k, h))| SenseMapRow {
                key: k.to_string(),
                homonym_id: h.to_string(),
                line: i + 1,
            }),
            &lex,
        );
        assert!(map.excluded().is_empty());
        (lex, map)
    }

    #[test]
    fn yard_translation_sets_are_disjoint() {
        let (lex, map) = yard_world();
        let (c, a) = bitext(&[
            ("yard", "yard%1:23:00::", &["iarda"]),
            ("yard", "yard%1:23:00::", &["yard"]),
            ("yard", "yard%1:15:00::", &["cortile"]),
            ("yard", "yard%1:15:01::", &["giardino", "cortile"]),
        ]);
        let sets = extract_translation_sets(&c, &a, &map, &lex);
        let yard = &sets.per_word[&Word::new("yard", Pos::Noun).unwrap()];
        assert_eq!(yard.len(), 2);
        let t1: Vec<&str> = yard[0].translations.keys().map(String::as_str).collect();
        let t2: Vec<&str> = yard[1].translations.keys().map(String::as_str).collect();
        assert_eq!(t1, vec!["iarda", "yard"]);
        assert_eq!(t2, vec!["cortile", "giardino"]);
        assert!(pairwise_disjoint(yard));

        let merged = merge_senses_by_translation(&c, &a, &Word::new("yard", Pos::Noun).unwrap(), 1);
        let homonym_of = |k: &SenseKey| map.homonym_of(k.as_str()).unwrap();
        let groups: Vec<Vec<&str>> = merged
            .groups
            .iter()
            .map(|g| g.iter().map(homonym_of).collect())
            .collect();
        assert_eq!(groups, vec![vec!["yard_2", "yard_2"], vec!["yard_1"]]);
        let report = check_ohpt(&c, &a, &map, &lex);
        assert_eq!(report.summary.inconsistent, 0);
        assert_eq!(report.summary.instances, 4);
    }

    #[test]
    fn six_links_two_homonyms_hand_enumerated() {
        let (lex, map) = yard_world();
        let (c, a) = bitext(&[
            ("yard", "yard%1:23:00::", &["iarda", "yard"]),
            ("yard", "yard%1:23:00::", &["iarda"]),
            ("yard", "yard%1:15:00::", &["cortile", "corte"]),
            ("yard", "yard%1:15:01::", &["cortile"]),
        ]);
        let sets = extract_translation_sets(&c, &a, &map, &lex);
        let yard = &sets.per_word[&Word::new("yard", Pos::Noun).unwrap()];
        let expect1: BTreeMap<String, usize> = [("iarda".to_string(), 2), ("yard".to_string(), 1)]
            .into_iter()
            .collect();
        let expect2: BTreeMap<String, usize> = [("corte".to_string(), 1), ("cortile".to_string(), 2)]
            .into_iter()
            .collect();
        assert_eq!(yard[0].translations, expect1);
        assert_eq!(yard[1].translations, expect2);
    }

    #[test]
    fn game_gioco_is_consistent_band_banda_is_not() {
        let (lex, map) = yard_world();
        let (c, a) = bitext(&[
            ("game", "game%1:04:00::", &["gioco"]),
            ("game", "game%1:04:01::", &["gioco"]),
            ("game", "game%1:04:02::", &["gioco"]),
            ("band", "band%1:06:00::", &["banda"]),
            ("band", "band%1:14:00::", &["banda"]),
            ("band", "band%1:14:00::", &["gruppo"]),
        ]);
        let report = check_ohpt(&c, &a, &map, &lex);
        let keys: Vec<(String, bool)> = report.instances.iter().map(|i| (i.key(), i.consistent)).collect();
        assert_eq!(
            keys,
            vec![
                ("band#n#banda".to_string(), false),
                ("band#n#gruppo".to_string(), true),
                ("game#n#gioco".to_string(), true),
            ]
        );
        let game = &report.instances[2];
        assert_eq!(game.occurrences.len(), 3);
        assert_eq!(report.summary.inconsistent, 1);
        let band = extract_translation_sets(&c, &a, &map, &lex);
        assert!(!pairwise_disjoint(
            &band.per_word[&Word::new("band", Pos::Noun).unwrap()]
        ));
    }

    #[test]
    fn unaligned_and_unmapped() {
        let (lex, map) = yard_world();
        let (c, a) = bitext(&[("yard", "yard%1:23:00::", &[]), ("band", "band%1:99:00::", &["banda"])]);
        let sets = extract_translation_sets(&c, &a, &map, &lex);
        assert!(!sets.per_word.contains_key(&Word::new("yard", Pos::Noun).unwrap()));
        assert_eq!(sets.skipped.unmapped, vec!["d000.s001.t000".to_string()]);
    }

    #[test]
    fn transitive_merge() {
        let (c, a) = bitext(&[
            ("game", "game%1:04:00::", &["gioco"]),
            ("game", "game%1:04:01::", &["gioco", "partita"]),
            ("game", "game%1:04:02::", &["partita"]),
            ("game", "game%1:09:00::", &["selvaggina"]),
        ]);
        let game = Word::new("game", Pos::Noun).unwrap();
        let g = merge_senses_by_translation(&c, &a, &game, 1);
        let sizes: Vec<usize> = g.groups.iter().map(BTreeSet::len).collect();
        assert_eq!(sizes, vec![3, 1]);
        // min_shared = 2 keeps everything apart
        let g = merge_senses_by_translation(&c, &a, &game, 2);
        assert_eq!(g.groups.len(), 4);
    }

    #[test]
    fn no_shared_translations_gives_singletons() {
        let (c, a) = bitext(&[("game", "game%1:04:00::", &["a"]), ("game", "game%1:04:01::", &["b"])]);
        let g = merge_senses_by_translation(&c, &a, &Word::new("game", Pos::Noun).unwrap(), 1);
        assert_eq!(g.groups.len(), 2);
        let dc = DerivedClustering::build(&c, &a, [&Word::new("game", Pos::Noun).unwrap()], 1);
        assert_eq!(dc.to_clustering().len(), 2);
    }

    #[test]
    fn identical_groupings_compare_equal() {
        let (lex, map) = yard_world();
        let (c, a) = bitext(&[
            ("yard", "yard%1:23:00::", &["iarda"]),
            ("yard", "yard%1:15:00::", &["cortile"]),
            ("band", "band%1:06:00::", &["banda"]),
            ("band", "band%1:14:00::", &["banda"]),
        ]);
        let g = HomonymGrouping {
            sense_map: &map,
            lexicon: &lex,
        };
        let opts = CompareOptions {
            sample_size: 2,
            seed: 3,
            ..CompareOptions::default()
        };
        let cmp = compare_partitioning("a", &g, "b", &g, &c, &a, &opts).unwrap();
        assert_eq!(cmp.table, ContingencyTable2x2::new(1, 1, 1, 1));
        assert_eq!(cmp.chi_squared.unwrap().statistic, 0.0);
        assert_eq!(cmp.a.overlapping_translations, 1);

        let opts = CompareOptions { sample_size: 3, ..opts };
        assert_eq!(
            compare_partitioning("a", &g, "b", &g, &c, &a, &opts).unwrap_err(),
            PartitionError::TooFewCandidates {
                side: "a".into(),
                available: 2,
                requested: 3
            }
        );
    }
}
