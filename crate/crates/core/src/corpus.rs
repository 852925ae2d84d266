//! Sense-annotated corpora, bitext alignment links, sense clusterings and
//! identifier mapping tables.
//!
//! Readers in the `homcheck` crate produce the raw document tree and a gold
//! key table; [`AnnotatedCorpus::assemble`] joins them, validates ids and
//! builds the word and document indices.

use alloc::borrow::ToOwned;
use alloc::collections::{BTreeMap, BTreeSet};
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use serde::{Deserialize, Serialize};
use unicode_normalization::UnicodeNormalization;

use crate::lexicon::{normalize_lemma, Pos, SenseKey, Word};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CorpusError {
    DuplicateDocument(String),
    DuplicateSentence(String),
    DuplicateInstance(String),
    /// Instance or sentence id does not extend its parent's id.
    IdHierarchy {
        id: String,
        parent: String,
    },
    BadInstancePos {
        instance_id: String,
        tag: String,
    },
    BadInstanceLemma(String),
    DuplicateCluster(String),
    EmptyCluster(String),
    OverlappingClusters {
        key: String,
        first: String,
        second: String,
    },
    DuplicateIdMapping(String),
}

impl fmt::Display for CorpusError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CorpusError::DuplicateDocument(id) => write!(f, "duplicate document id {id}"),
            CorpusError::DuplicateSentence(id) => write!(f, "duplicate sentence id {id}"),
            CorpusError::DuplicateInstance(id) => write!(f, "duplicate instance id {id}"),
            CorpusError::IdHierarchy { id, parent } => {
                write!(f, "id {id} does not start with its parent id {parent}")
            }
            CorpusError::BadInstancePos { instance_id, tag } => {
                write!(f, "instance {instance_id} has non open-class POS {tag:?}")
            }
            CorpusError::BadInstanceLemma(id) => write!(f, "instance {id} has an empty lemma"),
            CorpusError::DuplicateCluster(id) => write!(f, "duplicate cluster id {id}"),
            CorpusError::EmptyCluster(id) => write!(f, "cluster {id} has no sense keys"),
            CorpusError::OverlappingClusters { key, first, second } => write!(
                f,
                "sense key {key} appears in clusters {first} and {second} of the same word"
            ),
            CorpusError::DuplicateIdMapping(id) => write!(f, "identifier {id} mapped twice"),
        }
    }
}

#[cfg(feature = "std")]
impl std::error::Error for CorpusError {}

/// A token as read from the corpus file.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RawToken {
    pub surface: String,
    pub lemma: String,
    pub pos_tag: String,
    /// Set for `<instance>` elements.
    pub instance_id: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RawSentence {
    pub id: String,
    pub tokens: Vec<RawToken>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RawDocument {
    pub id: String,
    pub sentences: Vec<RawSentence>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Token {
    pub surface: String,
    pub lemma: String,
    pub pos_tag: String,
    /// Whether the token was an `<instance>` element in the source file,
    /// even if it ended up without gold keys.
    pub annotated: bool,
    /// Index into [`AnnotatedCorpus::instances`].
    pub instance: Option<usize>,
}

impl Token {
    /// Open-class POS of the token, if any.
    pub fn content_pos(&self) -> Option<Pos> {
        Pos::from_tag(&self.pos_tag)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Sentence {
    pub id: String,
    pub tokens: Vec<Token>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Document {
    pub id: String,
    pub sentences: Vec<Sentence>,
}

/// A sense-annotated token.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AnnotatedInstance {
    pub id: String,
    pub document_id: String,
    pub sentence_id: String,
    /// 0-based token index within the sentence.
    pub position: usize,
    pub lemma: String,
    pub pos: Pos,
    pub gold_keys: Vec<SenseKey>,
    pub document: usize,
    pub sentence: usize,
}

impl AnnotatedInstance {
    pub fn word(&self) -> Word {
        // lemma is normalized and non-empty on assembly
        Word::new(&self.lemma, self.pos).expect("instance lemma validated on assembly")
    }
}

/// Token, type and sense counts of a corpus.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct CorpusStats {
    pub documents: usize,
    pub sentences: usize,
    /// Annotated instances.
    pub word_tokens: usize,
    /// Distinct (lemma, pos) among annotated instances.
    pub word_types: usize,
    /// Distinct gold sense keys.
    pub senses: usize,
}

/// Non-fatal problems found while joining a corpus with its gold keys.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct CorpusDiagnostics {
    /// `<instance>` elements without any usable gold key; dropped.
    pub instances_without_gold: Vec<String>,
    /// Gold lines naming an instance that is not in the corpus; ignored.
    pub gold_for_unknown_instances: Vec<String>,
    /// (instance id, key) pairs whose key failed to parse; the key is dropped.
    pub bad_gold_keys: Vec<(String, String)>,
    /// Instances with a gold key whose lemma differs from the instance lemma.
    /// Kept, with the instance lemma taken as authoritative.
    pub gold_lemma_mismatches: Vec<String>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct AnnotatedCorpus {
    documents: Vec<Document>,
    instances: Vec<AnnotatedInstance>,
    by_id: BTreeMap<String, usize>,
    by_word: BTreeMap<Word, Vec<usize>>,
    by_document: Vec<Vec<usize>>,
    stats: CorpusStats,
}

fn check_prefix(id: &str, parent: &str) -> Result<(), CorpusError> {
    if id.len() > parent.len() && id.starts_with(parent) {
        Ok(())
    } else {
        Err(CorpusError::IdHierarchy {
            id: id.to_owned(),
            parent: parent.to_owned(),
        })
    }
}

impl AnnotatedCorpus {
    /// Joins a document tree with its gold key table.
    ///
    /// Gold keys are raw strings keyed by instance id. Keys that fail to
    /// parse are dropped; instances left without keys become plain tokens.
    pub fn assemble(
        raw: Vec<RawDocument>,
        gold: &BTreeMap<String, Vec<String>>,
    ) -> Result<(AnnotatedCorpus, CorpusDiagnostics), CorpusError> {
        let mut corpus = AnnotatedCorpus::default();
        let mut diag = CorpusDiagnostics::default();
        let mut doc_ids = BTreeSet::new();
        let mut sentence_ids = BTreeSet::new();
        let mut seen_instances = BTreeSet::new();
        let mut types = BTreeSet::new();
        let mut senses = BTreeSet::new();

        for (d, raw_doc) in raw.into_iter().enumerate() {
            if !doc_ids.insert(raw_doc.id.clone()) {
                return Err(CorpusError::DuplicateDocument(raw_doc.id));
            }
            let mut doc_instances = Vec::new();
            let mut sentences = Vec::with_capacity(raw_doc.sentences.len());
            for (s, raw_sent) in raw_doc.sentences.into_iter().enumerate() {
                check_prefix(&raw_sent.id, &raw_doc.id)?;
                if !sentence_ids.insert(raw_sent.id.clone()) {
                    return Err(CorpusError::DuplicateSentence(raw_sent.id));
                }
                let mut tokens = Vec::with_capacity(raw_sent.tokens.len());
                for (position, raw_tok) in raw_sent.tokens.into_iter().enumerate() {
                    let mut token = Token {
                        surface: raw_tok.surface,
                        lemma: raw_tok.lemma,
                        pos_tag: raw_tok.pos_tag,
                        annotated: raw_tok.instance_id.is_some(),
                        instance: None,
                    };
                    if let Some(id) = raw_tok.instance_id {
                        check_prefix(&id, &raw_sent.id)?;
                        if !seen_instances.insert(id.clone()) {
                            return Err(CorpusError::DuplicateInstance(id));
                        }
                        let pos = Pos::from_tag(&token.pos_tag).ok_or_else(|| CorpusError::BadInstancePos {
                            instance_id: id.clone(),
                            tag: token.pos_tag.clone(),
                        })?;
                        let lemma = normalize_lemma(&token.lemma);
                        if lemma.is_empty() {
                            return Err(CorpusError::BadInstanceLemma(id));
                        }
                        let mut keys = Vec::new();
                        for raw_key in gold.get(&id).into_iter().flatten() {
                            match SenseKey::parse(raw_key) {
                                Ok(k) => {
                                    if !keys.contains(&k) {
                                        keys.push(k)
                                    }
                                }
                                Err(_) => diag.bad_gold_keys.push((id.clone(), raw_key.clone())),
                            }
                        }
                        if keys.is_empty() {
                            diag.instances_without_gold.push(id);
                        } else {
                            if keys.iter().any(|k| !k.lemma_matches(&lemma)) {
                                diag.gold_lemma_mismatches.push(id.clone());
                            }
                            let index = corpus.instances.len();
                            let word = Word::new(&lemma, pos).map_err(|_| CorpusError::BadInstanceLemma(id.clone()))?;
                            senses.extend(keys.iter().cloned());
                            types.insert(word.clone());
                            corpus.by_word.entry(word).or_default().push(index);
                            corpus.by_id.insert(id.clone(), index);
                            doc_instances.push(index);
                            corpus.instances.push(AnnotatedInstance {
                                id,
                                document_id: raw_doc.id.clone(),
                                sentence_id: raw_sent.id.clone(),
                                position,
                                lemma,
                                pos,
                                gold_keys: keys,
                                document: d,
                                sentence: s,
                            });
                            token.instance = Some(index);
                        }
                    }
                    tokens.push(token);
                }
                corpus.stats.sentences += 1;
                sentences.push(Sentence {
                    id: raw_sent.id,
                    tokens,
                });
            }
            corpus.by_document.push(doc_instances);
            corpus.documents.push(Document {
                id: raw_doc.id,
                sentences,
            });
        }

        for id in gold.keys() {
            if !seen_instances.contains(id) {
                diag.gold_for_unknown_instances.push(id.clone());
            }
        }
        corpus.stats.documents = corpus.documents.len();
        corpus.stats.word_tokens = corpus.instances.len();
        corpus.stats.word_types = types.len();
        corpus.stats.senses = senses.len();
        Ok((corpus, diag))
    }

    pub fn documents(&self) -> &[Document] {
        &self.documents
    }

    pub fn instances(&self) -> &[AnnotatedInstance] {
        &self.instances
    }

    pub fn instance(&self, index: usize) -> &AnnotatedInstance {
        &self.instances[index]
    }

    pub fn instance_index(&self, id: &str) -> Option<usize> {
        self.by_id.get(id).copied()
    }

    pub fn instance_by_id(&self, id: &str) -> Option<&AnnotatedInstance> {
        self.instance_index(id).map(|i| &self.instances[i])
    }

    /// Instance indices of a word, in corpus order.
    pub fn instances_of(&self, word: &Word) -> &[usize] {
        self.by_word.get(word).map_or(&[], Vec::as_slice)
    }

    pub fn words(&self) -> impl Iterator<Item = (&Word, &[usize])> {
        self.by_word.iter().map(|(w, v)| (w, v.as_slice()))
    }

    /// Instance indices of the `doc`-th document, in corpus order.
    pub fn document_instances(&self, doc: usize) -> &[usize] {
        &self.by_document[doc]
    }

    pub fn sentence_of(&self, inst: &AnnotatedInstance) -> &Sentence {
        &self.documents[inst.document].sentences[inst.sentence]
    }

    /// Counts gathered during assembly.
    pub fn stats(&self) -> CorpusStats {
        self.stats
    }

    /// The same counts, recomputed by walking the document tree.
    pub fn recount(&self) -> CorpusStats {
        let mut stats = CorpusStats {
            documents: self.documents.len(),
            ..CorpusStats::default()
        };
        let mut types = BTreeSet::new();
        let mut senses = BTreeSet::new();
        for doc in &self.documents {
            stats.sentences += doc.sentences.len();
            for tok in doc.sentences.iter().flat_map(|s| &s.tokens) {
                if let Some(i) = tok.instance {
                    let inst = &self.instances[i];
                    stats.word_tokens += 1;
                    types.insert((inst.lemma.as_str(), inst.pos));
                    senses.extend(inst.gold_keys.iter().map(SenseKey::as_str));
                }
            }
        }
        stats.word_types = types.len();
        stats.senses = senses.len();
        stats
    }

    /// Rebuilds the raw document tree and gold table this corpus came from,
    /// minus anything dropped on assembly.
    pub fn to_raw(&self) -> (Vec<RawDocument>, BTreeMap<String, Vec<String>>) {
        let mut gold = BTreeMap::new();
        let docs = self
            .documents
            .iter()
            .map(|doc| RawDocument {
                id: doc.id.clone(),
                sentences: doc
                    .sentences
                    .iter()
                    .map(|sent| RawSentence {
                        id: sent.id.clone(),
                        tokens: sent
                            .tokens
                            .iter()
                            .map(|tok| {
                                let instance_id = tok.instance.map(|i| {
                                    let inst = &self.instances[i];
                                    gold.insert(
                                        inst.id.clone(),
                                        inst.gold_keys.iter().map(|k| k.as_str().to_owned()).collect(),
                                    );
                                    inst.id.clone()
                                });
                                RawToken {
                                    surface: tok.surface.clone(),
                                    lemma: tok.lemma.clone(),
                                    pos_tag: tok.pos_tag.clone(),
                                    instance_id,
                                }
                            })
                            .collect(),
                    })
                    .collect(),
            })
            .collect();
        (docs, gold)
    }
}

/// Normalizes a target-language lemma: Unicode NFC, then lowercase.
pub fn normalize_target(raw: &str) -> String {
    raw.trim().nfc().collect::<String>().to_lowercase()
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct AlignmentLink {
    /// Index into the companion corpus' instances.
    pub instance: usize,
    pub target: String,
}

/// Links from annotated instances to target-language lemmas.
///
/// One link per input line; repeated lines stay repeated.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct AlignmentSet {
    links: Vec<AlignmentLink>,
    dropped: Vec<String>,
}

impl AlignmentSet {
    /// Builds the set from `(instance_id, target_lemma)` pairs, dropping
    /// links to instances the corpus does not have.
    pub fn build<I>(rows: I, corpus: &AnnotatedCorpus) -> AlignmentSet
    where
        I: IntoIterator<Item = (String, String)>,
    {
        let mut out = AlignmentSet::default();
        for (id, target) in rows {
            match corpus.instance_index(&id) {
                Some(instance) => out.links.push(AlignmentLink {
                    instance,
                    target: normalize_target(&target),
                }),
                None => out.dropped.push(id),
            }
        }
        out
    }

    pub fn links(&self) -> &[AlignmentLink] {
        &self.links
    }

    pub fn len(&self) -> usize {
        self.links.len()
    }

    pub fn is_empty(&self) -> bool {
        self.links.is_empty()
    }

    /// Ids of dropped links, one entry per dropped line.
    pub fn dropped(&self) -> &[String] {
        &self.dropped
    }

    /// Targets grouped by instance index.
    pub fn by_instance(&self) -> BTreeMap<usize, Vec<&str>> {
        let mut out: BTreeMap<usize, Vec<&str>> = BTreeMap::new();
        for link in &self.links {
            out.entry(link.instance).or_default().push(&link.target);
        }
        out
    }

    /// A copy with `extra` links appended.
    pub fn with_links<I: IntoIterator<Item = AlignmentLink>>(&self, extra: I) -> AlignmentSet {
        let mut out = self.clone();
        out.links.extend(extra);
        out
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SenseCluster {
    pub id: String,
    pub word: Word,
    pub keys: BTreeSet<SenseKey>,
}

/// Clusters of senses. Clusters of the same word are pairwise disjoint.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SenseClustering {
    clusters: Vec<SenseCluster>,
    by_word_key: BTreeMap<(Word, String), usize>,
}

impl SenseClustering {
    pub fn from_clusters(clusters: Vec<SenseCluster>) -> Result<SenseClustering, CorpusError> {
        let mut ids = BTreeSet::new();
        let mut by_word_key = BTreeMap::new();
        for (i, cluster) in clusters.iter().enumerate() {
            if !ids.insert(cluster.id.as_str()) {
                return Err(CorpusError::DuplicateCluster(cluster.id.clone()));
            }
            if cluster.keys.is_empty() {
                return Err(CorpusError::EmptyCluster(cluster.id.clone()));
            }
            for key in &cluster.keys {
                let slot = (cluster.word.clone(), key.as_str().to_owned());
                if let Some(&j) = by_word_key.get(&slot) {
                    let first: &SenseCluster = &clusters[j];
                    return Err(CorpusError::OverlappingClusters {
                        key: key.as_str().to_owned(),
                        first: first.id.clone(),
                        second: cluster.id.clone(),
                    });
                }
                by_word_key.insert(slot, i);
            }
        }
        Ok(SenseClustering { clusters, by_word_key })
    }

    pub fn clusters(&self) -> &[SenseCluster] {
        &self.clusters
    }

    pub fn len(&self) -> usize {
        self.clusters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.clusters.is_empty()
    }

    /// The cluster of `word` containing `key`.
    pub fn cluster_of(&self, word: &Word, key: &str) -> Option<&SenseCluster> {
        self.by_word_key
            .get(&(word.clone(), key.to_owned()))
            .map(|&i| &self.clusters[i])
    }

    pub fn into_clusters(self) -> Vec<SenseCluster> {
        self.clusters
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum IdExclusion {
    /// Declared unmapped by the table.
    Unmapped,
    /// Not mentioned by the table at all.
    Absent,
}

/// Old identifier to new identifier, plus identifiers known to have no
/// counterpart.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct IdMapTable {
    map: BTreeMap<String, String>,
    unmapped: BTreeSet<String>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct IdMapOutcome {
    pub renamed: BTreeSet<String>,
    pub excluded: Vec<(String, IdExclusion)>,
}

impl IdMapTable {
    /// Rows are `(old, Some(new))` or `(old, None)` for unmapped ids.
    pub fn from_rows<I>(rows: I) -> Result<IdMapTable, CorpusError>
    where
        I: IntoIterator<Item = (String, Option<String>)>,
    {
        let mut table = IdMapTable::default();
        for (old, new) in rows {
            if table.map.contains_key(&old) || table.unmapped.contains(&old) {
                return Err(CorpusError::DuplicateIdMapping(old));
            }
            match new {
                Some(new) => {
                    table.map.insert(old, new);
                }
                None => {
                    table.unmapped.insert(old);
                }
            }
        }
        Ok(table)
    }

    pub fn identity<'a, I: IntoIterator<Item = &'a str>>(ids: I) -> IdMapTable {
        IdMapTable {
            map: ids.into_iter().map(|k| (k.to_owned(), k.to_owned())).collect(),
            unmapped: BTreeSet::new(),
        }
    }

    pub fn lookup(&self, old: &str) -> Result<&str, IdExclusion> {
        match self.map.get(old) {
            Some(new) => Ok(new),
            None if self.unmapped.contains(old) => Err(IdExclusion::Unmapped),
            None => Err(IdExclusion::Absent),
        }
    }

    pub fn apply<'a, I: IntoIterator<Item = &'a str>>(&self, keys: I) -> IdMapOutcome {
        let mut out = IdMapOutcome::default();
        for key in keys {
            match self.lookup(key) {
                Ok(new) => {
                    out.renamed.insert(new.to_owned());
                }
                Err(reason) => out.excluded.push((key.to_owned(), reason)),
            }
        }
        out.excluded.sort();
        out
    }
}

#[cfg(test)]
pub(crate) mod tests {
    use super::*;
    use alloc::string::ToString;
    use alloc::vec;

    pub(crate) fn tok(lemma: &str, tag: &str, id: Option<&str>) -> RawToken {
        RawToken {
            surface: lemma.to_string(),
            lemma: lemma.to_string(),
            pos_tag: tag.to_string(),
            instance_id: id.map(ToString::to_string),
        }
    }

    fn gold(rows: &[(&str, &[&str])]) -> BTreeMap<String, Vec<String>> {
        rows.iter()
            .map(|(id, keys)| (id.to_string(), keys.iter().map(|k| k.to_string()).collect()))
            .collect()
    }

    #[test]
    fn minimal_corpus() {
        let raw = vec![RawDocument {
            id: "d000".into(),
            sentences: vec![RawSentence {
                id: "d000.s000".into(),
                tokens: vec![tok("bank", "NOUN", Some("d000.s000.t000"))],
            }],
        }];
        let (c, diag) = AnnotatedCorpus::assemble(raw, &gold(&[("d000.s000.t000", &["bank%1:14:00::"])])).unwrap();
        let s = c.stats();
        assert_eq!((s.word_tokens, s.word_types, s.senses), (1, 1, 1));
        assert_eq!(s, c.recount());
        assert_eq!(diag, CorpusDiagnostics::default());
    }

    /// 3 documents x 2 sentences with repeated lemmas.
    fn three_docs() -> (Vec<RawDocument>, BTreeMap<String, Vec<String>>) {
        let mut docs = Vec::new();
        let mut g = BTreeMap::new();
        for d in 0..3 {
            let did = alloc::format!("d{d:03}");
            let mut sentences = Vec::new();
            for s in 0..2 {
                let sid = alloc::format!("{did}.s{s:03}");
                let t0 = alloc::format!("{sid}.t000");
                let t1 = alloc::format!("{sid}.t001");
                g.insert(t0.clone(), vec!["bank%1:14:00::".to_string()]);
                let lemma = if (d + s) % 2 == 0 { "run" } else { "walk" };
                g.insert(t1.clone(), vec![alloc::format!("{lemma}%2:38:0{d}::")]);
                sentences.push(RawSentence {
                    id: sid,
                    tokens: vec![
                        tok("bank", "NOUN", Some(&t0)),
                        tok("the", "DET", None),
                        tok(lemma, "VERB", Some(&t1)),
                    ],
                });
            }
            docs.push(RawDocument { id: did, sentences });
        }
        (docs, g)
    }

    #[test]
    fn index_sizes_match_hand_count() {
        let (docs, g) = three_docs();
        let (c, _) = AnnotatedCorpus::assemble(docs, &g).unwrap();
        // bank x6; run at (0,0),(1,1),(2,0); walk at (0,1),(1,0),(2,1)
        assert_eq!(c.instances_of(&Word::new("bank", Pos::Noun).unwrap()).len(), 6);
        assert_eq!(c.instances_of(&Word::new("run", Pos::Verb).unwrap()).len(), 3);
        assert_eq!(c.instances_of(&Word::new("walk", Pos::Verb).unwrap()).len(), 3);
        assert_eq!(c.document_instances(1).len(), 4);
        let s = c.stats();
        assert_eq!((s.word_tokens, s.word_types), (12, 3));
        // bank key + run%..00,01,02 + walk%..00,01,02
        assert_eq!(s.senses, 7);
        assert_eq!(s, c.recount());
        for (word, idxs) in c.words() {
            for &i in idxs {
                let inst = c.instance(i);
                assert_eq!(&inst.word(), word);
                let t = &c.sentence_of(inst).tokens[inst.position];
                assert_eq!(t.instance, Some(i));
            }
        }
    }

    #[test]
    fn gold_problems_are_reported() {
        let (docs, mut g) = three_docs();
        g.remove("d000.s000.t000");
        g.insert("d009.s000.t000".into(), vec!["x%1:00:00::".into()]);
        g.insert(
            "d001.s000.t000".into(),
            vec!["garbage".into(), "shore%1:17:00::".into()],
        );
        let (c, diag) = AnnotatedCorpus::assemble(docs, &g).unwrap();
        assert_eq!(diag.instances_without_gold, vec!["d000.s000.t000".to_string()]);
        assert_eq!(diag.gold_for_unknown_instances, vec!["d009.s000.t000".to_string()]);
        assert_eq!(diag.bad_gold_keys.len(), 1);
        assert_eq!(diag.gold_lemma_mismatches, vec!["d001.s000.t000".to_string()]);
        assert_eq!(c.stats().word_tokens, 11);
        let tokens = &c.documents()[0].sentences[0].tokens;
        assert!(tokens[0].annotated && tokens[0].instance.is_none());
    }

    #[test]
    fn id_hierarchy_enforced() {
        let raw = vec![RawDocument {
            id: "d000".into(),
            sentences: vec![RawSentence {
                id: "d000.s000".into(),
                tokens: vec![tok("bank", "NOUN", Some("d001.s000.t000"))],
            }],
        }];
        assert!(matches!(
            AnnotatedCorpus::assemble(raw, &BTreeMap::new()),
            Err(CorpusError::IdHierarchy { .. })
        ));
    }

    #[test]
    fn alignment_drops_unknown_ids() {
        let (docs, g) = three_docs();
        let (c, _) = AnnotatedCorpus::assemble(docs, &g).unwrap();
        let rows = vec![
            ("d000.s000.t000".to_string(), "Banca".to_string()),
            ("d000.s000.t000".to_string(), "banca".to_string()),
            ("d000.s001.t000".to_string(), "riva".to_string()),
            ("d002.s001.t001".to_string(), "camminare".to_string()),
            ("d404.s000.t000".to_string(), "nulla".to_string()),
        ];
        let a = AlignmentSet::build(rows, &c);
        assert_eq!(a.len(), 4);
        assert_eq!(a.dropped().len(), 1);
        assert_eq!(a.links()[0].target, "banca");
        assert_eq!(a.by_instance()[&0], vec!["banca", "banca"]);
        assert!(AlignmentSet::build(Vec::new(), &c).is_empty());
    }

    #[test]
    fn target_normalization_is_nfc() {
        // "e" + combining acute vs precomposed
        assert_eq!(normalize_target("Caf\u{65}\u{301}"), "caf\u{e9}");
        assert_eq!(normalize_target("ケース"), "ケース");
    }

    fn cluster(id: &str, lemma: &str, keys: &[&str]) -> SenseCluster {
        SenseCluster {
            id: id.into(),
            word: Word::new(lemma, Pos::Noun).unwrap(),
            keys: keys.iter().map(|k| SenseKey::parse(k).unwrap()).collect(),
        }
    }

    #[test]
    fn clustering_disjointness() {
        let ok = SenseClustering::from_clusters(vec![
            cluster("c1", "tap", &["tap%1:11:00::"]),
            cluster("c2", "tap", &["tap%1:06:00::", "tap%1:04:00::"]),
        ])
        .unwrap();
        assert_eq!(ok.len(), 2);
        let tap = Word::new("tap", Pos::Noun).unwrap();
        assert_eq!(ok.cluster_of(&tap, "tap%1:04:00::").unwrap().id, "c2");
        assert!(SenseClustering::from_clusters(vec![cluster("c", "tap", &["tap%1:11:00::"])]).is_ok());
        let err = SenseClustering::from_clusters(vec![
            cluster("c1", "tap", &["tap%1:11:00::"]),
            cluster("c2", "tap", &["tap%1:11:00::"]),
        ])
        .unwrap_err();
        assert_eq!(
            err,
            CorpusError::OverlappingClusters {
                key: "tap%1:11:00::".into(),
                first: "c1".into(),
                second: "c2".into()
            }
        );
    }

    #[test]
    fn id_map_application() {
        let keys: Vec<String> = (0..10).map(|i| alloc::format!("k{i}")).collect();
        let id = IdMapTable::identity(keys.iter().map(String::as_str));
        let out = id.apply(keys.iter().map(String::as_str));
        assert_eq!(out.renamed.len(), 10);
        assert!(out.excluded.is_empty());

        // 7 mapped, 2 declared unmapped, 1 absent
        let rows = keys
            .iter()
            .take(9)
            .enumerate()
            .map(|(i, k)| (k.clone(), if i < 7 { Some(alloc::format!("n{i}")) } else { None }));
        let table = IdMapTable::from_rows(rows).unwrap();
        let out = table.apply(keys.iter().map(String::as_str));
        assert_eq!(out.renamed.len(), 7);
        assert_eq!(out.excluded.len(), 3);
        assert_eq!(out.excluded[2], ("k9".to_string(), IdExclusion::Absent));
        assert!(IdMapTable::from_rows(vec![("a".into(), None), ("a".into(), Some("b".into()))]).is_err());
    }
}
