//! Seeded synthetic fixtures with planted violations of every hypothesis.
//!
//! A fixture is a training corpus with alignments, a held-out test corpus,
//! a homonym resource, a sense map and a sense clustering. The manifest
//! lists every planted violation under the key its checker reports it by.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;
use std::path::Path;

use homcheck_core::corpus::{RawDocument, RawSentence, RawToken};
use homcheck_core::Pos;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::formats::{write_corpus_xml, write_gold};

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Rates {
    pub ohpt: f64,
    pub ohpd: f64,
    pub ohpc: f64,
    pub ohpsc: f64,
}

impl Rates {
    pub fn all(rate: f64) -> Rates {
        Rates {
            ohpt: rate,
            ohpd: rate,
            ohpc: rate,
            ohpsc: rate,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct FixtureConfig {
    pub seed: u64,
    /// Homonymous words attested in the training corpus.
    pub words: usize,
    pub documents: usize,
    /// Homonymous words that only occur in the test corpus.
    pub unattested: usize,
    /// Lexicon words with a single homonym.
    pub monosemous: usize,
    /// Per-candidate probability of planting a violation.
    pub rates: Rates,
}

impl Default for FixtureConfig {
    fn default() -> Self {
        FixtureConfig {
            seed: 0,
            words: 12,
            documents: 8,
            unattested: 6,
            monosemous: 4,
            rates: Rates::all(0.05),
        }
    }
}

impl FixtureConfig {
    pub fn validate(&self) -> Result<()> {
        let r = self.rates;
        for (name, v) in [("ohpt", r.ohpt), ("ohpd", r.ohpd), ("ohpc", r.ohpc), ("ohpsc", r.ohpsc)] {
            if !(0.0..=1.0).contains(&v) {
                return Err(Error::Usage(format!("{name} rate must be in [0, 1], got {v}")));
            }
        }
        if self.words == 0 || self.documents < 3 {
            return Err(Error::Usage("fixtures need at least 1 word and 3 documents".to_owned()));
        }
        Ok(())
    }
}

pub const CORPUS: &str = "corpus.xml";
pub const GOLD: &str = "corpus.key";
pub const ALIGNMENTS: &str = "alignments.tsv";
pub const RESOURCE: &str = "resource.tsv";
pub const SENSE_MAP: &str = "sense_map.tsv";
pub const CLUSTERS: &str = "clusters.tsv";
pub const TEST_CORPUS: &str = "test.xml";
pub const TEST_GOLD: &str = "test.key";
pub const MANIFEST: &str = "manifest.json";

/// Planted violations, as the adjudication keys the checkers report.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Planted {
    /// `lemma#pos#target`.
    pub ohpt: Vec<String>,
    /// `lemma#pos#document`.
    pub ohpd: Vec<String>,
    /// Test instance ids with a misleading context.
    pub ohpc: Vec<String>,
    /// Cluster ids.
    pub ohpsc: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Manifest {
    pub format_version: u32,
    pub config: FixtureConfig,
    pub files: BTreeMap<String, String>,
    pub planted: Planted,
    pub homonymous_words: Vec<String>,
    pub unattested_words: Vec<String>,
    /// Test instances of unattested words.
    pub unmodeled_test_instances: Vec<String>,
    /// Instances whose gold key is not in the sense map.
    pub unmapped_instances: Vec<String>,
    pub unmapped_test_instances: Vec<String>,
    /// Instances with gold keys of two homonyms.
    pub data_error_instances: Vec<String>,
    pub data_error_test_instances: Vec<String>,
    /// Alignment rows naming an instance that does not exist.
    pub dropped_links: Vec<String>,
    pub unverifiable_clusters: Vec<String>,
    /// Clusters of words that are not homonymous.
    pub excluded_clusters: Vec<String>,
    /// Homonym id to its two signature context words.
    pub signatures: BTreeMap<String, [String; 2]>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Fixture {
    pub manifest: Manifest,
    pub corpus: Vec<RawDocument>,
    pub gold: BTreeMap<String, Vec<String>>,
    /// (instance id, target lemma) rows.
    pub alignments: Vec<(String, String)>,
    pub resource: String,
    pub sense_map: String,
    pub clusters: String,
    pub test_corpus: Vec<RawDocument>,
    pub test_gold: BTreeMap<String, Vec<String>>,
}

impl Fixture {
    pub fn write(&self, dir: &Path) -> Result<()> {
        std::fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
        let mut align = String::new();
        for (id, t) in &self.alignments {
            let _ = writeln!(align, "{id}\t{t}");
        }
        let manifest = serde_json::to_string_pretty(&self.manifest).expect("manifest serializes") + "\n";
        let files = [
            (CORPUS, write_corpus_xml(&self.corpus)),
            (GOLD, write_gold(&self.gold)),
            (ALIGNMENTS, align),
            (RESOURCE, self.resource.clone()),
            (SENSE_MAP, self.sense_map.clone()),
            (CLUSTERS, self.clusters.clone()),
            (TEST_CORPUS, write_corpus_xml(&self.test_corpus)),
            (TEST_GOLD, write_gold(&self.test_gold)),
            (MANIFEST, manifest),
        ];
        for (name, text) in files {
            let path = dir.join(name);
            std::fs::write(&path, text).map_err(|e| Error::io(&path, e))?;
        }
        Ok(())
    }
}

struct Homonym {
    id: String,
    senses: Vec<String>,
    targets: Vec<String>,
    signature: [String; 2],
}

struct HomWord {
    lemma: String,
    pos: Pos,
    homonyms: Vec<Homonym>,
    orphan: String,
}

impl HomWord {
    fn key(&self) -> String {
        format!("{}#{}", self.lemma, self.pos)
    }
}

struct Names {
    used: BTreeSet<String>,
}

impl Names {
    fn fresh(&mut self, rng: &mut ChaCha8Rng, syllables: usize) -> String {
        const C: &[u8] = b"bdfgklmnprstvz";
        const V: &[u8] = b"aeiou";
        loop {
            let mut s = String::new();
            for _ in 0..syllables {
                s.push(C[rng.gen_range(0..C.len())] as char);
                s.push(V[rng.gen_range(0..V.len())] as char);
            }
            s.push(C[rng.gen_range(0..C.len())] as char);
            if self.used.insert(s.clone()) {
                return s;
            }
        }
    }
}

const ORIGINS: [(&str, &str); 5] = [
    ("Old English", "oe"),
    ("Old French", "of"),
    ("Latin", "la"),
    ("Old Norse", "on"),
    ("Italian", "it"),
];

fn sense_key(lemma: &str, pos: Pos, lex_file: u32, lex_id: u32) -> String {
    format!("{lemma}%{}:{lex_file:02}:{lex_id:02}::", pos.ss_type())
}

fn make_word(names: &mut Names, rng: &mut ChaCha8Rng, index: usize) -> HomWord {
    let lemma = names.fresh(rng, 2);
    let pos = if index % 3 == 2 { Pos::Verb } else { Pos::Noun };
    let count = if index % 4 == 3 { 3 } else { 2 };
    let homonyms = (0..count)
        .map(|h| Homonym {
            id: format!("{lemma}_{pos}_{}", h + 1),
            senses: (0..2)
                .map(|s| sense_key(&lemma, pos, 10 + h as u32, s as u32))
                .collect(),
            targets: (0..2).map(|_| names.fresh(rng, 3)).collect(),
            signature: [names.fresh(rng, 2), names.fresh(rng, 2)],
        })
        .collect();
    HomWord {
        orphan: sense_key(&lemma, pos, 30, 0),
        lemma,
        pos,
        homonyms,
    }
}

fn tag(pos: Pos) -> &'static str {
    match pos {
        Pos::Noun => "NOUN",
        Pos::Verb => "VERB",
        Pos::Adjective => "ADJ",
        Pos::Adverb => "ADV",
    }
}

fn wf(lemma: &str, tag: &str) -> RawToken {
    RawToken {
        surface: lemma.to_owned(),
        lemma: lemma.to_owned(),
        pos_tag: tag.to_owned(),
        instance_id: None,
    }
}

/// Context around one focus token.
enum Context<'a> {
    Signature(&'a [String; 2]),
    Neutral(&'a str, &'a str),
}

struct Filler {
    lemma: String,
    key: String,
    target: String,
}

/// Builds sentences and gold for one document.
struct DocBuilder<'a> {
    id: String,
    sentences: Vec<RawSentence>,
    gold: &'a mut BTreeMap<String, Vec<String>>,
}

impl DocBuilder<'_> {
    /// Appends `the sig1 FOCUS sig2 of the filler .` and returns the focus
    /// and filler instance ids.
    fn sentence(
        &mut self,
        word: (&str, Pos),
        keys: Vec<String>,
        context: Context<'_>,
        filler: &Filler,
    ) -> (String, String) {
        let sid = format!("{}.s{:03}", self.id, self.sentences.len());
        let focus_id = format!("{sid}.t002");
        let filler_id = format!("{sid}.t006");
        let (left, right) = match context {
            Context::Signature([a, b]) => (a.as_str(), b.as_str()),
            Context::Neutral(a, b) => (a, b),
        };
        let left_tag = if word.1 == Pos::Verb { "ADV" } else { "ADJ" };
        let mut focus = wf(word.0, tag(word.1));
        focus.instance_id = Some(focus_id.clone());
        let mut fill = wf(&filler.lemma, "NOUN");
        fill.instance_id = Some(filler_id.clone());
        let tokens = vec![
            wf("the", "DET"),
            wf(left, left_tag),
            focus,
            wf(right, "NOUN"),
            wf("of", "ADP"),
            wf("the", "DET"),
            fill,
            wf(".", "."),
        ];
        self.gold.insert(focus_id.clone(), keys);
        self.gold.insert(filler_id.clone(), vec![filler.key.clone()]);
        self.sentences.push(RawSentence { id: sid, tokens });
        (focus_id, filler_id)
    }

    fn finish(self) -> RawDocument {
        RawDocument {
            id: self.id,
            sentences: self.sentences,
        }
    }
}

/// One planned focus token of the training corpus.
struct Occ {
    word: usize,
    /// `None` for an unmapped token.
    homonym: Option<usize>,
    keys: Vec<String>,
    data_error: bool,
}

fn bernoulli(rng: &mut ChaCha8Rng, p: f64) -> bool {
    // always draw so that the stream does not depend on the rate
    let x: f64 = rng.gen();
    x < p
}

/// Test token plan: order, word, gold keys, context, misleading.
type TestItem<'a> = (usize, &'a HomWord, Vec<String>, Context<'a>, bool);

pub fn generate(config: &FixtureConfig) -> Result<Fixture> {
    config.validate()?;
    let rng = &mut ChaCha8Rng::seed_from_u64(config.seed);
    let rates = config.rates;
    let mut names = Names {
        used: ["the", "of"].iter().map(|s| s.to_string()).collect(),
    };
    let words: Vec<HomWord> = (0..config.words).map(|i| make_word(&mut names, rng, i)).collect();
    let unattested: Vec<HomWord> = (0..config.unattested)
        .map(|i| make_word(&mut names, rng, config.words + i))
        .collect();
    let monosemous: Vec<Filler> = (0..config.monosemous)
        .map(|_| {
            let lemma = names.fresh(rng, 2);
            Filler {
                key: sense_key(&lemma, Pos::Noun, 5, 0),
                target: names.fresh(rng, 3),
                lemma,
            }
        })
        .collect();
    let plain: Vec<Filler> = (0..6)
        .map(|_| {
            let lemma = names.fresh(rng, 2);
            Filler {
                key: sense_key(&lemma, Pos::Noun, 6, 0),
                target: names.fresh(rng, 3),
                lemma,
            }
        })
        .collect();
    let fillers: Vec<&Filler> = monosemous.iter().chain(&plain).collect();
    let mut planted = Planted::default();

    // resource and sense map
    let mut resource =
        String::from("# homonym_id\tlemma\tpos\torigin_language\torigin_form\tgloss\ttranslation_hint\n");
    let mut sense_map = String::from("# sense_key\thomonym_id\n");
    let mut signatures = BTreeMap::new();
    for w in words.iter().chain(&unattested) {
        for (h, hom) in w.homonyms.iter().enumerate() {
            let (lang, code) = ORIGINS[(h + w.lemma.len()) % ORIGINS.len()];
            let _ = writeln!(
                resource,
                "{}\t{}\t{}\t{lang}\t{}{code}\tsense group {}\t{}",
                hom.id,
                w.lemma,
                w.pos,
                w.lemma,
                h + 1,
                hom.targets[0]
            );
            for s in &hom.senses {
                let _ = writeln!(sense_map, "{s}\t{}", hom.id);
            }
            signatures.insert(hom.id.clone(), hom.signature.clone());
        }
    }
    for f in &monosemous {
        let id = format!("{}_n_1", f.lemma);
        let _ = writeln!(
            resource,
            "{id}\t{}\tn\tLatin\t{}us\tsolo\t{}",
            f.lemma, f.lemma, f.target
        );
        let _ = writeln!(sense_map, "{}\t{id}", f.key);
    }
    // rows the sense map loader must exclude
    let w0 = &words[0];
    let _ = writeln!(sense_map, "not-a-sense-key\t{}", w0.homonyms[0].id);
    let _ = writeln!(sense_map, "{}\tno_such_homonym", sense_key(&w0.lemma, w0.pos, 40, 0));
    let wrong_pos = if w0.pos == Pos::Noun { Pos::Adverb } else { Pos::Noun };
    let _ = writeln!(
        sense_map,
        "{}\t{}",
        sense_key(&w0.lemma, wrong_pos, 41, 0),
        w0.homonyms[0].id
    );

    // training corpus: which homonym each (word, document) pair uses
    let mut per_doc: Vec<Vec<Occ>> = (0..config.documents).map(|_| Vec::new()).collect();
    for (wi, w) in words.iter().enumerate() {
        let n_hom = w.homonyms.len();
        let mut docs: Vec<usize> = (0..config.documents).collect();
        docs.shuffle(rng);
        let extra = rng.gen_range(0..=config.documents - n_hom.min(config.documents));
        let chosen = &docs[..(n_hom + extra).min(config.documents)];
        for (rank, &d) in chosen.iter().enumerate() {
            let dominant = if rank < n_hom { rank } else { rng.gen_range(0..n_hom) };
            let count = rng.gen_range(1..=3);
            let violate = count >= 2 && bernoulli(rng, rates.ohpd);
            for k in 0..count {
                let h = if violate && k == count - 1 {
                    (dominant + rng.gen_range(1..n_hom)) % n_hom
                } else {
                    dominant
                };
                let sense = w.homonyms[h].senses[rng.gen_range(0..2)].clone();
                per_doc[d].push(Occ {
                    word: wi,
                    homonym: Some(h),
                    keys: vec![sense],
                    data_error: false,
                });
            }
            if violate {
                planted.ohpd.push(format!("{}#d{d:03}", w.key()));
            }
        }
        if wi == 0 || rng.gen_bool(0.3) {
            let d = rng.gen_range(0..config.documents);
            per_doc[d].push(Occ {
                word: wi,
                homonym: None,
                keys: vec![w.orphan.clone()],
                data_error: false,
            });
        }
    }
    {
        let w = &words[0];
        let d = rng.gen_range(0..config.documents);
        per_doc[d].push(Occ {
            word: 0,
            homonym: Some(0),
            keys: vec![w.homonyms[0].senses[0].clone(), w.homonyms[1].senses[0].clone()],
            data_error: true,
        });
    }

    let mut gold = BTreeMap::new();
    let mut corpus = Vec::new();
    let mut unmapped_instances = Vec::new();
    let mut data_error_instances = Vec::new();
    // aligned focus tokens: (instance id, word, homonym, targets)
    let mut aligned: Vec<(String, usize, usize, Vec<String>)> = Vec::new();
    let mut filler_links = Vec::new();
    for (d, mut occs) in per_doc.into_iter().enumerate() {
        occs.shuffle(rng);
        let mut doc = DocBuilder {
            id: format!("d{d:03}"),
            sentences: Vec::new(),
            gold: &mut gold,
        };
        for occ in occs {
            let w = &words[occ.word];
            let filler = fillers[rng.gen_range(0..fillers.len())];
            let context = match occ.homonym {
                Some(h) => Context::Signature(&w.homonyms[h].signature),
                None => Context::Neutral(&fillers[0].lemma, &fillers[1].lemma),
            };
            let (id, filler_id) = doc.sentence((&w.lemma, w.pos), occ.keys, context, filler);
            if rng.gen_bool(0.3) {
                filler_links.push((filler_id, filler.target.clone()));
            }
            match occ.homonym {
                None => unmapped_instances.push(id),
                Some(_) if occ.data_error => data_error_instances.push(id),
                Some(h) => {
                    if rng.gen_bool(0.85) {
                        let targets = &w.homonyms[h].targets;
                        let mut ts = vec![targets[rng.gen_range(0..targets.len())].clone()];
                        if rng.gen_bool(0.1) {
                            ts = targets.clone();
                        }
                        aligned.push((id, occ.word, h, ts));
                    }
                }
            }
        }
        corpus.push(doc.finish());
    }

    // translation violations: one token of homonym B takes a target of A
    for (wi, w) in words.iter().enumerate() {
        let mut by_hom: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
        for (i, a) in aligned.iter().enumerate().filter(|(_, a)| a.1 == wi) {
            by_hom.entry(a.2).or_default().push(i);
        }
        if by_hom.len() < 2 || !bernoulli(rng, rates.ohpt) {
            continue;
        }
        let homs: Vec<usize> = by_hom.keys().copied().collect();
        let a = homs[rng.gen_range(0..homs.len())];
        let b = loop {
            let b = homs[rng.gen_range(0..homs.len())];
            if b != a {
                break b;
            }
        };
        let a_targets: BTreeSet<&String> = by_hom[&a].iter().flat_map(|&i| &aligned[i].3).collect();
        let a_targets: Vec<&String> = a_targets.into_iter().collect();
        let target = a_targets[rng.gen_range(0..a_targets.len())].clone();
        let victim = by_hom[&b][rng.gen_range(0..by_hom[&b].len())];
        aligned[victim].3 = vec![target.clone()];
        planted.ohpt.push(format!("{}#{target}", w.key()));
    }

    let mut alignments = Vec::new();
    for (id, _, _, targets) in &aligned {
        for t in targets {
            // target lemmas are compared case-insensitively
            let t = if rng.gen_bool(0.2) {
                let mut c = t.chars();
                let first = c.next().expect("non-empty target").to_uppercase().collect::<String>();
                first + c.as_str()
            } else {
                t.clone()
            };
            alignments.push((id.clone(), t));
        }
    }
    alignments.extend(filler_links);
    let dropped = format!("d{:03}.s000.t000", config.documents + 1);
    alignments.push((dropped.clone(), names.fresh(rng, 3)));
    alignments.shuffle(rng);

    // test corpus
    let mut test_gold = BTreeMap::new();
    let mut test_corpus = Vec::new();
    let mut unmodeled = Vec::new();
    let mut test_unmapped = Vec::new();
    let mut test_data_errors = Vec::new();
    let test_docs = 3;
    let mut planned: Vec<(usize, &HomWord, Vec<String>, Context<'_>, bool)> = Vec::new();
    for w in &words {
        for (h, hom) in w.homonyms.iter().enumerate() {
            for _ in 0..rng.gen_range(1..=2) {
                let sense = hom.senses[rng.gen_range(0..2)].clone();
                let mislead = bernoulli(rng, rates.ohpc);
                let context = if mislead {
                    let other = (h + rng.gen_range(1..w.homonyms.len())) % w.homonyms.len();
                    Context::Signature(&w.homonyms[other].signature)
                } else {
                    Context::Signature(&hom.signature)
                };
                planned.push((rng.gen_range(0..test_docs), w, vec![sense], context, mislead));
            }
        }
    }
    let mut unattested_count = 0;
    for w in &unattested {
        let hom = &w.homonyms[rng.gen_range(0..w.homonyms.len())];
        planned.push((
            rng.gen_range(0..test_docs),
            w,
            vec![hom.senses[0].clone()],
            Context::Signature(&hom.signature),
            false,
        ));
        unattested_count += 1;
    }
    let w0 = &words[0];
    planned.push((
        0,
        w0,
        vec![w0.orphan.clone()],
        Context::Neutral(&fillers[0].lemma, &fillers[1].lemma),
        false,
    ));
    planned.push((
        1,
        w0,
        vec![w0.homonyms[1].senses[1].clone(), w0.homonyms[0].senses[1].clone()],
        Context::Signature(&w0.homonyms[1].signature),
        false,
    ));
    let first_special = planned.len() - unattested_count - 2;
    let mut docs: Vec<Vec<TestItem<'_>>> = (0..test_docs).map(|_| Vec::new()).collect();
    for (i, (d, w, keys, ctx, mislead)) in planned.into_iter().enumerate() {
        docs[d].push((i, w, keys, ctx, mislead));
    }
    for (d, mut items) in docs.into_iter().enumerate() {
        items.shuffle(rng);
        let mut doc = DocBuilder {
            id: format!("t{d:03}"),
            sentences: Vec::new(),
            gold: &mut test_gold,
        };
        for (i, w, keys, ctx, mislead) in items {
            let filler = fillers[rng.gen_range(0..fillers.len())];
            let (id, _) = doc.sentence((&w.lemma, w.pos), keys, ctx, filler);
            if mislead {
                planted.ohpc.push(id);
            } else if i >= first_special {
                match i - first_special {
                    k if k < unattested_count => unmodeled.push(id),
                    k if k == unattested_count => test_unmapped.push(id),
                    _ => test_data_errors.push(id),
                }
            }
        }
        test_corpus.push(doc.finish());
    }

    // clustering
    let mut clusters: Vec<(String, String, Pos, Vec<String>)> = Vec::new();
    let mut unverifiable = Vec::new();
    let mut excluded_clusters = Vec::new();
    let mut next = 0;
    let mut cluster_id = || {
        next += 1;
        format!("c{next:04}")
    };
    for (wi, w) in words.iter().chain(&unattested).enumerate() {
        let mut groups: Vec<Vec<String>> = w.homonyms.iter().map(|h| h.senses.clone()).collect();
        let mut impure = None;
        if bernoulli(rng, rates.ohpsc) {
            let n = groups.len();
            let a = rng.gen_range(0..n);
            let b = (a + rng.gen_range(1..n)) % n;
            let at = rng.gen_range(0..groups[b].len());
            let moved = groups[b].remove(at);
            groups[a].push(moved);
            impure = Some(a);
        }
        for (g, keys) in groups.into_iter().enumerate() {
            if impure.is_none() && rng.gen_bool(0.25) {
                for k in keys {
                    clusters.push((cluster_id(), w.lemma.clone(), w.pos, vec![k]));
                }
            } else {
                let id = cluster_id();
                if impure == Some(g) {
                    planted.ohpsc.push(id.clone());
                }
                clusters.push((id, w.lemma.clone(), w.pos, keys));
            }
        }
        if wi == 0 || rng.gen_bool(0.3) {
            let id = cluster_id();
            unverifiable.push(id.clone());
            clusters.push((id, w.lemma.clone(), w.pos, vec![w.orphan.clone()]));
        }
    }
    for f in &fillers {
        let id = cluster_id();
        excluded_clusters.push(id.clone());
        clusters.push((id, f.lemma.clone(), Pos::Noun, vec![f.key.clone()]));
    }
    clusters.shuffle(rng);
    let mut clusters_tsv = String::from("# cluster_id\tlemma\tpos\tsense_keys\n");
    for (id, lemma, pos, keys) in &clusters {
        let _ = writeln!(clusters_tsv, "{id}\t{lemma}\t{pos}\t{}", keys.join(","));
    }

    planted.ohpt.sort();
    planted.ohpd.sort();
    planted.ohpc.sort();
    planted.ohpsc.sort();
    unverifiable.sort();
    excluded_clusters.sort();
    unmodeled.sort();
    let files = [
        ("corpus", CORPUS),
        ("gold", GOLD),
        ("alignments", ALIGNMENTS),
        ("resource", RESOURCE),
        ("sense_map", SENSE_MAP),
        ("clusters", CLUSTERS),
        ("test_corpus", TEST_CORPUS),
        ("test_gold", TEST_GOLD),
    ]
    .iter()
    .map(|(k, v)| (k.to_string(), v.to_string()))
    .collect();
    let manifest = Manifest {
        format_version: 1,
        config: *config,
        files,
        planted,
        homonymous_words: words
            .iter()
            .chain(&unattested)
            .map(HomWord::key)
            .collect::<BTreeSet<_>>()
            .into_iter()
            .collect(),
        unattested_words: unattested
            .iter()
            .map(HomWord::key)
            .collect::<BTreeSet<_>>()
            .into_iter()
            .collect(),
        unmodeled_test_instances: unmodeled,
        unmapped_instances: sorted(unmapped_instances),
        unmapped_test_instances: test_unmapped,
        data_error_instances,
        data_error_test_instances: test_data_errors,
        dropped_links: vec![dropped],
        unverifiable_clusters: unverifiable,
        excluded_clusters,
        signatures,
    };
    Ok(Fixture {
        manifest,
        corpus,
        gold,
        alignments,
        resource,
        sense_map,
        clusters: clusters_tsv,
        test_corpus,
        test_gold,
    })
}

fn sorted(mut v: Vec<String>) -> Vec<String> {
    v.sort();
    v
}
