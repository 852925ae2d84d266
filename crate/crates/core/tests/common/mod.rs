#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet};

use homcheck_core::corpus::{RawDocument, RawSentence, RawToken};
use homcheck_core::lexicon::SenseMapRow;
use homcheck_core::{AlignmentSet, AnnotatedCorpus, HomonymEntry, Lexicon, Pos, SenseMap, Word};
use proptest::prelude::*;

pub const LEMMAS: [&str; 4] = ["bank", "bat", "lead", "pitch"];
const CONTEXT: [&str; 4] = ["river", "money", "metal", "music"];

/// One annotated focus token. `keys` holds (homonym, sense) choices; a
/// homonym index at or past the word's homonym count picks its unmapped key.
#[derive(Clone, Debug)]
pub struct TokenSpec {
    pub word: usize,
    pub keys: Vec<(usize, usize)>,
    pub targets: Vec<usize>,
    pub context: usize,
}

#[derive(Clone, Debug)]
pub struct WorldSpec {
    pub homonym_counts: Vec<usize>,
    pub docs: Vec<Vec<TokenSpec>>,
}

pub fn token_spec() -> impl Strategy<Value = TokenSpec> {
    (
        0..LEMMAS.len(),
        prop::collection::vec((0..4usize, 0..2usize), 1..=2),
        prop::collection::vec(0..5usize, 0..=2),
        0..CONTEXT.len(),
    )
        .prop_map(|(word, keys, targets, context)| TokenSpec {
            word,
            keys,
            targets,
            context,
        })
}

pub fn world_spec() -> impl Strategy<Value = WorldSpec> {
    (
        prop::collection::vec(1..=3usize, LEMMAS.len()),
        prop::collection::vec(prop::collection::vec(token_spec(), 1..10), 1..5),
    )
        .prop_map(|(homonym_counts, docs)| WorldSpec { homonym_counts, docs })
}

pub fn homonym_id(word: usize, h: usize) -> String {
    format!("{}_{}", LEMMAS[word], h + 1)
}

pub fn sense_key(word: usize, h: usize, s: usize) -> String {
    format!("{}%1:{}:{s:02}::", LEMMAS[word], 10 + h)
}

pub fn orphan_key(word: usize) -> String {
    format!("{}%1:30:00::", LEMMAS[word])
}

pub fn noun(lemma: &str) -> Word {
    Word::new(lemma, Pos::Noun).unwrap()
}

pub fn entry(id: &str, lemma: &str, pos: &[Pos]) -> HomonymEntry {
    HomonymEntry {
        homonym_id: id.to_owned(),
        lemma: lemma.to_owned(),
        pos_set: pos.iter().copied().collect(),
        origin_language: "Latin".to_owned(),
        origin_form: format!("{lemma}us"),
        gloss: String::new(),
        translation_hint: String::new(),
    }
}

pub struct World {
    pub spec: WorldSpec,
    pub lexicon: Lexicon,
    pub sense_map: SenseMap,
    pub raw: Vec<RawDocument>,
    pub gold: BTreeMap<String, Vec<String>>,
    pub rows: Vec<(String, String)>,
    pub corpus: AnnotatedCorpus,
    pub alignments: AlignmentSet,
}

fn wf(lemma: &str, tag: &str) -> RawToken {
    RawToken {
        surface: lemma.to_owned(),
        lemma: lemma.to_owned(),
        pos_tag: tag.to_owned(),
        instance_id: None,
    }
}

pub type Raw = (Vec<RawDocument>, BTreeMap<String, Vec<String>>, Vec<(String, String)>);

pub fn raw_documents(spec: &WorldSpec) -> Raw {
    let mut gold = BTreeMap::new();
    let mut rows = Vec::new();
    let mut raw = Vec::new();
    for (d, tokens) in spec.docs.iter().enumerate() {
        let mut sentences = Vec::new();
        for (s, t) in tokens.iter().enumerate() {
            let sid = format!("d{d}.s{s}");
            let id = format!("{sid}.t1");
            let mut focus = wf(LEMMAS[t.word], "NN");
            focus.instance_id = Some(id.clone());
            sentences.push(RawSentence {
                id: sid,
                tokens: vec![wf(CONTEXT[t.context], "JJ"), focus, wf(".", ".")],
            });
            let count = spec.homonym_counts[t.word];
            let keys: BTreeSet<String> = t
                .keys
                .iter()
                .map(|&(h, s)| {
                    if h < count {
                        sense_key(t.word, h, s)
                    } else {
                        orphan_key(t.word)
                    }
                })
                .collect();
            gold.insert(id.clone(), keys.into_iter().collect());
            for &target in &t.targets {
                rows.push((id.clone(), format!("t{target}")));
            }
        }
        raw.push(RawDocument {
            id: format!("d{d}"),
            sentences,
        });
    }
    (raw, gold, rows)
}

pub fn lexicon_for(counts: &[usize]) -> Lexicon {
    let mut entries = Vec::new();
    for (w, &n) in counts.iter().enumerate() {
        for h in 0..n {
            entries.push(entry(&homonym_id(w, h), LEMMAS[w], &[Pos::Noun]));
        }
    }
    Lexicon::from_entries(entries).unwrap()
}

pub fn sense_map_for(counts: &[usize], lexicon: &Lexicon) -> SenseMap {
    let mut rows = Vec::new();
    for (w, &n) in counts.iter().enumerate() {
        for h in 0..n {
            for s in 0..2 {
                rows.push(SenseMapRow {
                    key: sense_key(w, h, s),
                    homonym_id: homonym_id(w, h),
                    line: rows.len() + 1,
                });
            }
        }
    }
    SenseMap::build(rows, lexicon)
}

impl World {
    pub fn build(spec: WorldSpec) -> World {
        let lexicon = lexicon_for(&spec.homonym_counts);
        let sense_map = sense_map_for(&spec.homonym_counts, &lexicon);
        let (raw, gold, rows) = raw_documents(&spec);
        let (corpus, _) = AnnotatedCorpus::assemble(raw.clone(), &gold).unwrap();
        let alignments = AlignmentSet::build(rows.clone(), &corpus);
        World {
            spec,
            lexicon,
            sense_map,
            raw,
            gold,
            rows,
            corpus,
            alignments,
        }
    }

    /// Homonym of every gold key of `id`, or `None` when some key is unmapped.
    pub fn key_homonyms(&self, id: &str) -> Option<BTreeSet<String>> {
        self.gold[id]
            .iter()
            .map(|k| self.sense_map.homonym_of(k).map(str::to_owned))
            .collect()
    }
}
