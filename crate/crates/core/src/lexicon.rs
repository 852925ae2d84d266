//! Words, homonyms and the sense-to-homonym bridge.
//!
//! A [`Word`] is a lemma/POS pair. A [`HomonymEntry`] is one lexeme of the
//! homonym resource; an entry listing several parts of speech stands for one
//! lexeme per listed POS, all sharing the entry id. The [`Lexicon`] indexes
//! entries by word, which gives both directions of the word/lexeme relation
//! and the set of homonymous words (words with at least two entries).

use alloc::borrow::ToOwned;
use alloc::collections::{BTreeMap, BTreeSet};
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::borrow::Borrow;
use core::cmp::Ordering;
use core::fmt;
use core::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

/// The four open-class parts of speech.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Pos {
    #[serde(rename = "n")]
    Noun,
    #[serde(rename = "v")]
    Verb,
    #[serde(rename = "a")]
    Adjective,
    #[serde(rename = "r")]
    Adverb,
}

impl Pos {
    pub const ALL: [Pos; 4] = [Pos::Noun, Pos::Verb, Pos::Adjective, Pos::Adverb];

    pub fn as_char(self) -> char {
        match self {
            Pos::Noun => 'n',
            Pos::Verb => 'v',
            Pos::Adjective => 'a',
            Pos::Adverb => 'r',
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Pos::Noun => "n",
            Pos::Verb => "v",
            Pos::Adjective => "a",
            Pos::Adverb => "r",
        }
    }

    /// WordNet synset type as used in sense keys. Satellite adjectives (5)
    /// fold into [`Pos::Adjective`].
    pub fn from_ss_type(ss_type: u8) -> Option<Pos> {
        match ss_type {
            1 => Some(Pos::Noun),
            2 => Some(Pos::Verb),
            3 | 5 => Some(Pos::Adjective),
            4 => Some(Pos::Adverb),
            _ => None,
        }
    }

    pub fn ss_type(self) -> u8 {
        match self {
            Pos::Noun => 1,
            Pos::Verb => 2,
            Pos::Adjective => 3,
            Pos::Adverb => 4,
        }
    }

    /// Maps a corpus POS tag onto the open-class universe.
    ///
    /// Accepts the one-letter codes, the universal tag set (`NOUN`, `VERB`,
    /// `ADJ`, `ADV`) and Penn Treebank tags (`NN*`, `VB*`, `JJ*`, `RB*`).
    /// Everything else, including proper nouns, is not a content word.
    pub fn from_tag(tag: &str) -> Option<Pos> {
        match tag {
            "n" | "N" | "NOUN" => return Some(Pos::Noun),
            "v" | "V" | "VERB" => return Some(Pos::Verb),
            "a" | "s" | "A" | "ADJ" => return Some(Pos::Adjective),
            "r" | "R" | "ADV" => return Some(Pos::Adverb),
            _ => {}
        }
        if tag.starts_with("NNP") {
            None
        } else if tag.starts_with("NN") {
            Some(Pos::Noun)
        } else if tag.starts_with("VB") {
            Some(Pos::Verb)
        } else if tag.starts_with("JJ") {
            Some(Pos::Adjective)
        } else if tag.starts_with("RB") {
            Some(Pos::Adverb)
        } else {
            None
        }
    }
}

impl fmt::Display for Pos {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Pos {
    type Err = LexiconError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim().to_ascii_lowercase().as_str() {
            "n" | "noun" => Ok(Pos::Noun),
            "v" | "verb" => Ok(Pos::Verb),
            "a" | "adj" | "adjective" => Ok(Pos::Adjective),
            "r" | "adv" | "adverb" => Ok(Pos::Adverb),
            _ => Err(LexiconError::BadPos(s.to_owned())),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum LexiconError {
    BadLemma(String),
    BadPos(String),
    EmptyPosSet { homonym_id: String },
    EmptyHomonymId,
    DuplicateHomonym(String),
}

impl fmt::Display for LexiconError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LexiconError::BadLemma(l) => write!(f, "invalid lemma {l:?}"),
            LexiconError::BadPos(p) => write!(f, "invalid part of speech {p:?}"),
            LexiconError::EmptyPosSet { homonym_id } => {
                write!(f, "homonym {homonym_id} has an empty POS list")
            }
            LexiconError::EmptyHomonymId => f.write_str("empty homonym id"),
            LexiconError::DuplicateHomonym(id) => write!(f, "duplicate homonym id {id}"),
        }
    }
}

#[cfg(feature = "std")]
impl std::error::Error for LexiconError {}

/// Lowercases a lemma and joins multiword parts with underscores.
pub fn normalize_lemma(raw: &str) -> String {
    let mut out = String::with_capacity(raw.len());
    for (i, part) in raw.split_whitespace().enumerate() {
        if i > 0 {
            out.push('_');
        }
        out.push_str(&part.to_lowercase());
    }
    out
}

/// A lemma/POS pair.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Word {
    lemma: String,
    pos: Pos,
}

impl Word {
    /// Builds a word from a raw lemma, normalizing it first.
    pub fn new(lemma: &str, pos: Pos) -> Result<Word, LexiconError> {
        let lemma = normalize_lemma(lemma);
        if lemma.is_empty() {
            return Err(LexiconError::BadLemma(lemma));
        }
        Ok(Word { lemma, pos })
    }

    pub fn lemma(&self) -> &str {
        &self.lemma
    }

    pub fn pos(&self) -> Pos {
        self.pos
    }
}

/// Renders as `lemma#pos`, the form used inside instance keys.
impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}#{}", self.lemma, self.pos)
    }
}

impl FromStr for Word {
    type Err = LexiconError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let (lemma, pos) = s.rsplit_once('#').ok_or_else(|| LexiconError::BadLemma(s.to_owned()))?;
        Word::new(lemma, pos.parse()?)
    }
}

/// One lexeme of the homonym resource.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HomonymEntry {
    pub homonym_id: String,
    pub lemma: String,
    pub pos_set: BTreeSet<Pos>,
    pub origin_language: String,
    pub origin_form: String,
    pub gloss: String,
    pub translation_hint: String,
}

impl HomonymEntry {
    /// Words this lexeme is written as, one per listed POS.
    pub fn words(&self) -> impl Iterator<Item = Word> + '_ {
        self.pos_set.iter().map(move |&pos| Word {
            lemma: self.lemma.clone(),
            pos,
        })
    }

    /// Comma-separated POS list in canonical order, e.g. `n,v`.
    pub fn pos_list(&self) -> String {
        let mut out = String::new();
        for (i, p) in self.pos_set.iter().enumerate() {
            if i > 0 {
                out.push(',');
            }
            out.push(p.as_char());
        }
        out
    }

    fn validate(mut self) -> Result<Self, LexiconError> {
        if self.homonym_id.is_empty() {
            return Err(LexiconError::EmptyHomonymId);
        }
        if self.pos_set.is_empty() {
            return Err(LexiconError::EmptyPosSet {
                homonym_id: self.homonym_id,
            });
        }
        let lemma = normalize_lemma(&self.lemma);
        if lemma.is_empty() {
            return Err(LexiconError::BadLemma(self.lemma));
        }
        self.lemma = lemma;
        Ok(self)
    }
}

/// The homonym resource, indexed by word.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Lexicon {
    entries: BTreeMap<String, HomonymEntry>,
    index: BTreeMap<Word, BTreeSet<String>>,
}

impl Lexicon {
    pub fn from_entries<I>(entries: I) -> Result<Lexicon, LexiconError>
    where
        I: IntoIterator<Item = HomonymEntry>,
    {
        let mut lex = Lexicon::default();
        for entry in entries {
            let entry = entry.validate()?;
            if lex.entries.contains_key(&entry.homonym_id) {
                return Err(LexiconError::DuplicateHomonym(entry.homonym_id));
            }
            for word in entry.words() {
                lex.index.entry(word).or_default().insert(entry.homonym_id.clone());
            }
            lex.entries.insert(entry.homonym_id.clone(), entry);
        }
        Ok(lex)
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn entry(&self, homonym_id: &str) -> Option<&HomonymEntry> {
        self.entries.get(homonym_id)
    }

    /// Entries ordered by homonym id.
    pub fn entries(&self) -> impl Iterator<Item = &HomonymEntry> {
        self.entries.values()
    }

    /// Entries in dump order: by lemma, POS list, then homonym id.
    pub fn canonical_entries(&self) -> Vec<&HomonymEntry> {
        let mut out: Vec<&HomonymEntry> = self.entries.values().collect();
        out.sort_by(|a, b| {
            (a.lemma.as_str(), a.pos_list(), a.homonym_id.as_str()).cmp(&(
                b.lemma.as_str(),
                b.pos_list(),
                b.homonym_id.as_str(),
            ))
        });
        out
    }

    /// The lexemes a word represents (empty if the word is unknown).
    pub fn homonyms_of(&self, word: &Word) -> impl Iterator<Item = &str> {
        self.index
            .get(word)
            .into_iter()
            .flat_map(|ids| ids.iter().map(String::as_str))
    }

    pub fn homonym_count(&self, word: &Word) -> usize {
        self.index.get(word).map_or(0, BTreeSet::len)
    }

    pub fn contains_word(&self, word: &Word) -> bool {
        self.index.contains_key(word)
    }

    /// Whether `homonym_id` is one of the lexemes written as `word`.
    pub fn represents(&self, word: &Word, homonym_id: &str) -> bool {
        self.index.get(word).is_some_and(|ids| ids.contains(homonym_id))
    }

    pub fn is_homonymous(&self, word: &Word) -> bool {
        self.homonym_count(word) >= 2
    }

    /// Words that represent at least two lexemes.
    pub fn homonymous_words(&self) -> BTreeSet<Word> {
        self.index
            .iter()
            .filter(|(_, ids)| ids.len() >= 2)
            .map(|(w, _)| w.clone())
            .collect()
    }

    /// All indexed words with their lexemes.
    pub fn words(&self) -> impl Iterator<Item = (&Word, &BTreeSet<String>)> {
        self.index.iter()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SenseKeyError {
    MissingPercent,
    ExtraPercent,
    EmptyLemma,
    FieldCount(usize),
    BadSsType,
    BadNumber,
}

impl fmt::Display for SenseKeyError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SenseKeyError::MissingPercent => f.write_str("missing '%' separator"),
            SenseKeyError::ExtraPercent => f.write_str("more than one '%'"),
            SenseKeyError::EmptyLemma => f.write_str("empty lemma"),
            SenseKeyError::FieldCount(n) => write!(f, "expected 5 ':'-separated fields, got {n}"),
            SenseKeyError::BadSsType => f.write_str("ss_type must be 1-5"),
            SenseKeyError::BadNumber => f.write_str("lex_filenum and lex_id must be numeric"),
        }
    }
}

#[cfg(feature = "std")]
impl std::error::Error for SenseKeyError {}

/// A WordNet sense key, `lemma%ss_type:lex_filenum:lex_id:head_word:head_id`.
///
/// Equality, ordering and hashing use the raw string, so a map keyed by
/// `SenseKey` can be queried with a `&str`.
#[derive(Clone, Debug)]
pub struct SenseKey {
    raw: String,
    split: usize,
    ss_type: u8,
}

impl SenseKey {
    pub fn parse(raw: &str) -> Result<SenseKey, SenseKeyError> {
        let split = raw.find('%').ok_or(SenseKeyError::MissingPercent)?;
        let (lemma, rest) = (&raw[..split], &raw[split + 1..]);
        if rest.contains('%') {
            return Err(SenseKeyError::ExtraPercent);
        }
        if lemma.is_empty() {
            return Err(SenseKeyError::EmptyLemma);
        }
        let fields: Vec<&str> = rest.split(':').collect();
        if fields.len() != 5 {
            return Err(SenseKeyError::FieldCount(fields.len()));
        }
        let ss_type = match fields[0] {
            "1" => 1,
            "2" => 2,
            "3" => 3,
            "4" => 4,
            "5" => 5,
            _ => return Err(SenseKeyError::BadSsType),
        };
        let numeric = |s: &str| !s.is_empty() && s.bytes().all(|b| b.is_ascii_digit());
        if !numeric(fields[1]) || !numeric(fields[2]) {
            return Err(SenseKeyError::BadNumber);
        }
        Ok(SenseKey {
            raw: raw.to_owned(),
            split,
            ss_type,
        })
    }

    pub fn as_str(&self) -> &str {
        &self.raw
    }

    /// The lemma part, exactly as written in the key.
    pub fn lemma(&self) -> &str {
        &self.raw[..self.split]
    }

    pub fn ss_type(&self) -> u8 {
        self.ss_type
    }

    pub fn pos(&self) -> Pos {
        // ss_type is validated on parse
        Pos::from_ss_type(self.ss_type).unwrap_or(Pos::Noun)
    }

    /// Whether the key's lemma equals `lemma` after normalization.
    pub fn lemma_matches(&self, lemma: &str) -> bool {
        normalize_lemma(&self.lemma().replace('_', " ")) == normalize_lemma(&lemma.replace('_', " "))
    }
}

impl PartialEq for SenseKey {
    fn eq(&self, other: &Self) -> bool {
        self.raw == other.raw
    }
}

impl Eq for SenseKey {}

impl PartialOrd for SenseKey {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for SenseKey {
    fn cmp(&self, other: &Self) -> Ordering {
        self.raw.cmp(&other.raw)
    }
}

impl core::hash::Hash for SenseKey {
    fn hash<H: core::hash::Hasher>(&self, state: &mut H) {
        self.raw.hash(state)
    }
}

impl Borrow<str> for SenseKey {
    fn borrow(&self) -> &str {
        &self.raw
    }
}

impl fmt::Display for SenseKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.raw)
    }
}

impl FromStr for SenseKey {
    type Err = SenseKeyError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        SenseKey::parse(s)
    }
}

impl Serialize for SenseKey {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.raw)
    }
}

impl<'de> Deserialize<'de> for SenseKey {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let raw = String::deserialize(deserializer)?;
        SenseKey::parse(&raw).map_err(serde::de::Error::custom)
    }
}

/// One `sense_key \t homonym_id` row as read from disk.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SenseMapRow {
    pub key: String,
    pub homonym_id: String,
    pub line: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ExclusionReason {
    BadKey,
    UnknownHomonym,
    LemmaMismatch,
    PosMismatch,
    /// The key was already mapped to a different homonym by an earlier row.
    Conflict,
}

impl ExclusionReason {
    pub fn as_str(self) -> &'static str {
        match self {
            ExclusionReason::BadKey => "bad-key",
            ExclusionReason::UnknownHomonym => "unknown-homonym",
            ExclusionReason::LemmaMismatch => "lemma-mismatch",
            ExclusionReason::PosMismatch => "pos-mismatch",
            ExclusionReason::Conflict => "conflict",
        }
    }
}

impl fmt::Display for ExclusionReason {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SenseMapExclusion {
    pub key: String,
    pub homonym_id: String,
    pub reason: ExclusionReason,
    pub line: usize,
}

/// Sense key to homonym id.
///
/// Rows are cross-checked against the lexicon when the map is built: the
/// homonym must exist, the key's lemma must equal the entry's lemma and the
/// key's POS must be one of the entry's POS values. Failing rows are kept
/// aside in [`SenseMap::excluded`].
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SenseMap {
    map: BTreeMap<SenseKey, String>,
    excluded: Vec<SenseMapExclusion>,
}

impl SenseMap {
    pub fn build<I>(rows: I, lexicon: &Lexicon) -> SenseMap
    where
        I: IntoIterator<Item = SenseMapRow>,
    {
        let mut out = SenseMap::default();
        for row in rows {
            let reason = match SenseKey::parse(&row.key) {
                Err(_) => Some(ExclusionReason::BadKey),
                Ok(key) => match lexicon.entry(&row.homonym_id) {
                    None => Some(ExclusionReason::UnknownHomonym),
                    Some(entry) if !key.lemma_matches(&entry.lemma) => Some(ExclusionReason::LemmaMismatch),
                    Some(entry) if !entry.pos_set.contains(&key.pos()) => Some(ExclusionReason::PosMismatch),
                    Some(_) => match out.map.get(&key) {
                        Some(existing) if *existing != row.homonym_id => Some(ExclusionReason::Conflict),
                        Some(_) => None,
                        None => {
                            out.map.insert(key, row.homonym_id.clone());
                            None
                        }
                    },
                },
            };
            if let Some(reason) = reason {
                out.excluded.push(SenseMapExclusion {
                    key: row.key,
                    homonym_id: row.homonym_id,
                    reason,
                    line: row.line,
                });
            }
        }
        out
    }

    pub fn homonym_of(&self, key: &str) -> Option<&str> {
        self.map.get(key).map(String::as_str)
    }

    pub fn len(&self) -> usize {
        self.map.len()
    }

    pub fn is_empty(&self) -> bool {
        self.map.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&SenseKey, &str)> {
        self.map.iter().map(|(k, v)| (k, v.as_str()))
    }

    pub fn excluded(&self) -> &[SenseMapExclusion] {
        &self.excluded
    }

    /// Sense keys mapped to `homonym_id`.
    pub fn senses_of<'a>(&'a self, homonym_id: &'a str) -> impl Iterator<Item = &'a SenseKey> {
        self.map
            .iter()
            .filter(move |(_, h)| h.as_str() == homonym_id)
            .map(|(k, _)| k)
    }

    /// Number of excluded rows per reason.
    pub fn exclusion_counts(&self) -> BTreeMap<ExclusionReason, usize> {
        let mut out = BTreeMap::new();
        for ex in &self.excluded {
            *out.entry(ex.reason).or_insert(0) += 1;
        }
        out
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MappingDisagreement {
    pub key: String,
    pub left: String,
    pub right: String,
}

/// Outcome of comparing two independently built sense maps.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MappingComparison {
    pub shared_keys: usize,
    pub disagreements: Vec<MappingDisagreement>,
}

impl MappingComparison {
    /// `None` when the maps share no key.
    pub fn rate(&self) -> Option<f64> {
        if self.shared_keys == 0 {
            None
        } else {
            Some(self.disagreements.len() as f64 / self.shared_keys as f64)
        }
    }

    pub fn describe_rate(&self) -> String {
        match self.rate() {
            None => "no overlap".to_string(),
            Some(r) => alloc::format!("{:.2}%", r * 100.0),
        }
    }
}

pub fn compare_mappings(left: &SenseMap, right: &SenseMap) -> MappingComparison {
    let mut shared_keys = 0;
    let mut disagreements = Vec::new();
    for (key, a) in &left.map {
        if let Some(b) = right.map.get(key) {
            shared_keys += 1;
            if a != b {
                disagreements.push(MappingDisagreement {
                    key: key.raw.clone(),
                    left: a.clone(),
                    right: b.clone(),
                });
            }
        }
    }
    MappingComparison {
        shared_keys,
        disagreements,
    }
}
