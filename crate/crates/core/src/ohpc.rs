//! One homonym per collocation, measured through a word-expert classifier.
//!
//! Each collocation type is a feature: content words at fixed offsets and
//! adjacent pairs of them, POS tags in a window, and content words anywhere
//! in the sentence. A multinomial naive Bayes model per word is trained on
//! one corpus and scored on another. If collocations determine the homonym,
//! the classifier picks a sense of the right homonym; its homonym-level
//! accuracy is a lower bound on how often the hypothesis holds.

use alloc::borrow::ToOwned;
use alloc::collections::{BTreeMap, BTreeSet};
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

use crate::corpus::{AnnotatedCorpus, Token};
use crate::lexicon::{normalize_lemma, Lexicon, SenseMap, Word};
use crate::ohpt::CheckSummary;
use crate::resolve::{resolve, DataError, Resolution, Skipped};

pub const BOS: &str = "<s>";
pub const EOS: &str = "</s>";
/// Slot value of a function word in positional features.
pub const FUNCTION_WORD: &str = "*";

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FeatureConfig {
    /// Positional features cover offsets `-positional..=positional`, minus 0.
    pub positional: usize,
    /// POS tag features cover offsets `-pos_window..=pos_window`.
    pub pos_window: usize,
    pub bag_of_words: bool,
}

impl Default for FeatureConfig {
    fn default() -> Self {
        FeatureConfig {
            positional: 2,
            pos_window: 3,
            bag_of_words: true,
        }
    }
}

/// Binary features, canonically ordered.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct FeatureVector(pub BTreeSet<String>);

impl FeatureVector {
    pub fn contains(&self, name: &str) -> bool {
        self.0.contains(name)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = &str> {
        self.0.iter().map(String::as_str)
    }
}

impl FromIterator<String> for FeatureVector {
    fn from_iter<I: IntoIterator<Item = String>>(iter: I) -> Self {
        FeatureVector(iter.into_iter().collect())
    }
}

fn content_lemma(token: &Token) -> Option<String> {
    token.content_pos().map(|_| normalize_lemma(&token.lemma))
}

fn slot(tokens: &[Token], position: usize, offset: isize) -> String {
    let at = position as isize + offset;
    if at < 0 {
        BOS.to_owned()
    } else if at as usize >= tokens.len() {
        EOS.to_owned()
    } else {
        content_lemma(&tokens[at as usize]).unwrap_or_else(|| FUNCTION_WORD.to_owned())
    }
}

/// Features of the token at `position`.
///
/// Feature names:
/// - `w:{offset}:{value}` for each nonzero offset in the positional window,
///   where value is the content lemma, `*` for a function word, or `<s>` /
///   `</s>` past the sentence edge;
/// - `ww:{o1}:{o2}:{v1}|{v2}` for consecutive nonzero offsets;
/// - `t:{offset}:{tag}` for each offset of the POS window, including 0;
/// - `b:{lemma}` for every other content word of the sentence.
///
/// Only surface lemmas and tags are read; sense annotations never are.
pub fn extract_from_tokens(tokens: &[Token], position: usize, config: &FeatureConfig) -> FeatureVector {
    let mut out = BTreeSet::new();
    let w = config.positional as isize;
    let offsets: Vec<isize> = (-w..=w).filter(|&o| o != 0).collect();
    let values: Vec<String> = offsets.iter().map(|&o| slot(tokens, position, o)).collect();
    for (o, v) in offsets.iter().zip(&values) {
        out.insert(format!("w:{o}:{v}"));
    }
    for i in 1..offsets.len() {
        out.insert(format!(
            "ww:{}:{}:{}|{}",
            offsets[i - 1],
            offsets[i],
            values[i - 1],
            values[i]
        ));
    }
    let p = config.pos_window as isize;
    for o in -p..=p {
        let at = position as isize + o;
        let tag = if at < 0 {
            BOS
        } else if at as usize >= tokens.len() {
            EOS
        } else {
            tokens[at as usize].pos_tag.as_str()
        };
        out.insert(format!("t:{o}:{tag}"));
    }
    if config.bag_of_words {
        for (i, tok) in tokens.iter().enumerate() {
            if i != position {
                if let Some(l) = content_lemma(tok) {
                    out.insert(format!("b:{l}"));
                }
            }
        }
    }
    FeatureVector(out)
}

/// Features of instance `index` of `corpus`.
pub fn extract_features(corpus: &AnnotatedCorpus, index: usize, config: &FeatureConfig) -> FeatureVector {
    let inst = corpus.instance(index);
    extract_from_tokens(&corpus.sentence_of(inst).tokens, inst.position, config)
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassStats {
    /// Training instances of this sense.
    pub count: u32,
    pub feature_counts: BTreeMap<String, u32>,
    /// Sum of `feature_counts`.
    pub total: u64,
}

/// Per-word naive Bayes model with add-one smoothing.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WordModel {
    pub word: Word,
    pub classes: BTreeMap<String, ClassStats>,
    pub training_instances: u32,
    /// Distinct features seen in training.
    pub vocabulary_size: u64,
    pub most_frequent_sense: String,
}

impl WordModel {
    /// Trains on `(sense key, features)` examples. `None` if there are none.
    pub fn train<'a, I>(word: Word, examples: I) -> Option<WordModel>
    where
        I: IntoIterator<Item = (&'a str, &'a FeatureVector)>,
    {
        let mut classes: BTreeMap<String, ClassStats> = BTreeMap::new();
        let mut vocabulary = BTreeSet::new();
        let mut training_instances = 0;
        for (sense, features) in examples {
            training_instances += 1;
            let stats = classes.entry(sense.to_owned()).or_default();
            stats.count += 1;
            for f in features.iter() {
                *stats.feature_counts.entry(f.to_owned()).or_insert(0) += 1;
                stats.total += 1;
                vocabulary.insert(f);
            }
        }
        let most_frequent_sense = most_frequent(&classes)?;
        let vocabulary_size = vocabulary.len() as u64;
        Some(WordModel {
            word,
            classes,
            training_instances,
            vocabulary_size,
            most_frequent_sense,
        })
    }

    fn in_vocabulary(&self, feature: &str) -> bool {
        self.classes.values().any(|c| c.feature_counts.contains_key(feature))
    }

    /// Log score of every class, in sense key order. Features never seen in
    /// training are ignored, so an all-unseen vector scores by prior alone.
    pub fn scores(&self, features: &FeatureVector) -> Vec<(&str, f64)> {
        let known: Vec<&str> = features.iter().filter(|f| self.in_vocabulary(f)).collect();
        let n = f64::from(self.training_instances);
        let v = self.vocabulary_size as f64;
        self.classes
            .iter()
            .map(|(sense, stats)| {
                let denom = stats.total as f64 + v;
                let mut score = libm::log(f64::from(stats.count) / n);
                for f in &known {
                    let count = stats.feature_counts.get(*f).copied().unwrap_or(0);
                    score += libm::log((f64::from(count) + 1.0) / denom);
                }
                (sense.as_str(), score)
            })
            .collect()
    }

    /// Highest-scoring sense; ties go to the smallest sense key.
    pub fn predict(&self, features: &FeatureVector) -> &str {
        let mut best: Option<(&str, f64)> = None;
        for (sense, score) in self.scores(features) {
            if best.is_none_or(|(_, s)| score > s) {
                best = Some((sense, score));
            }
        }
        best.map_or(self.most_frequent_sense.as_str(), |(s, _)| s)
    }

    /// Recomputes per-class totals and the vocabulary size from the counts.
    pub fn is_consistent(&self) -> bool {
        let mut vocab = BTreeSet::new();
        let mut n = 0u32;
        for c in self.classes.values() {
            if c.total != c.feature_counts.values().map(|&x| u64::from(x)).sum::<u64>() {
                return false;
            }
            vocab.extend(c.feature_counts.keys());
            n += c.count;
        }
        !self.classes.is_empty()
            && n == self.training_instances
            && vocab.len() as u64 == self.vocabulary_size
            && most_frequent(&self.classes).as_deref() == Some(self.most_frequent_sense.as_str())
    }
}

fn most_frequent(classes: &BTreeMap<String, ClassStats>) -> Option<String> {
    let mut best: Option<(&String, u32)> = None;
    for (sense, stats) in classes {
        if best.is_none_or(|(_, c)| stats.count > c) {
            best = Some((sense, stats.count));
        }
    }
    best.map(|(s, _)| s.clone())
}

/// Which words get a model.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum TrainScope {
    /// Homonymous words of the lexicon.
    #[default]
    Homonymous,
    /// Every annotated word.
    All,
}

/// Training examples per word. The class of an instance is its first
/// gold key.
pub fn training_examples(
    corpus: &AnnotatedCorpus,
    lexicon: &Lexicon,
    config: &FeatureConfig,
    scope: TrainScope,
) -> Vec<(Word, Vec<(String, FeatureVector)>)> {
    corpus
        .words()
        .filter(|(w, _)| scope == TrainScope::All || lexicon.is_homonymous(w))
        .map(|(w, indices)| {
            let examples = indices
                .iter()
                .map(|&i| {
                    let sense = corpus.instance(i).gold_keys[0].as_str().to_owned();
                    (sense, extract_features(corpus, i, config))
                })
                .collect();
            (w.clone(), examples)
        })
        .collect()
}

/// Trained models, one per word with training data.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Models {
    pub config: FeatureConfig,
    pub scope: TrainScope,
    /// Sorted by word.
    pub models: Vec<WordModel>,
}

impl Models {
    pub fn from_models(config: FeatureConfig, scope: TrainScope, mut models: Vec<WordModel>) -> Self {
        models.sort_by(|a, b| a.word.cmp(&b.word));
        Models { config, scope, models }
    }

    pub fn get(&self, word: &Word) -> Option<&WordModel> {
        self.models
            .binary_search_by(|m| m.word.cmp(word))
            .ok()
            .map(|i| &self.models[i])
    }

    pub fn len(&self) -> usize {
        self.models.len()
    }

    pub fn is_empty(&self) -> bool {
        self.models.is_empty()
    }
}

pub fn train(corpus: &AnnotatedCorpus, lexicon: &Lexicon, config: &FeatureConfig, scope: TrainScope) -> Models {
    let models = training_examples(corpus, lexicon, config, scope)
        .into_iter()
        .filter_map(|(word, examples)| WordModel::train(word, examples.iter().map(|(s, f)| (s.as_str(), f))))
        .collect();
    Models::from_models(*config, scope, models)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Prediction {
    pub instance_id: String,
    pub word: Word,
    pub gold_keys: Vec<String>,
    pub gold_homonym: String,
    pub predicted_sense: String,
    /// `None` when the predicted sense is not in the sense map.
    pub predicted_homonym: Option<String>,
    pub sense_correct: bool,
    pub homonym_correct: bool,
}

/// What happened to one test instance.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Outcome {
    /// Not an instance of a homonymous word.
    Ignored,
    Unmapped(String),
    DataError(DataError),
    /// The word has no model; never guessed.
    Unmodeled(String),
    Scored(Prediction),
}

pub fn evaluate_instance(
    models: &Models,
    test: &AnnotatedCorpus,
    index: usize,
    sense_map: &SenseMap,
    lexicon: &Lexicon,
) -> Outcome {
    let inst = test.instance(index);
    let gold_homonym = match resolve(inst, sense_map, lexicon) {
        Resolution::NotHomonymous => return Outcome::Ignored,
        Resolution::Unmapped => return Outcome::Unmapped(inst.id.clone()),
        Resolution::DataError(kind, homonyms) => {
            return Outcome::DataError(DataError {
                instance_id: inst.id.clone(),
                kind,
                gold_keys: inst.gold_keys.iter().map(|k| k.as_str().to_owned()).collect(),
                homonyms,
            })
        }
        Resolution::Homonym(h) => h,
    };
    let word = inst.word();
    let Some(model) = models.get(&word) else {
        return Outcome::Unmodeled(inst.id.clone());
    };
    let features = extract_features(test, index, &models.config);
    let predicted = model.predict(&features);
    let predicted_homonym = sense_map.homonym_of(predicted).map(str::to_owned);
    let sense_correct = inst.gold_keys.iter().any(|k| k.as_str() == predicted);
    // same sense implies same homonym even when the key itself is unmapped
    let homonym_correct = sense_correct || predicted_homonym.as_deref() == Some(gold_homonym);
    Outcome::Scored(Prediction {
        instance_id: inst.id.clone(),
        word,
        gold_keys: inst.gold_keys.iter().map(|k| k.as_str().to_owned()).collect(),
        gold_homonym: gold_homonym.to_owned(),
        predicted_sense: predicted.to_owned(),
        predicted_homonym,
        sense_correct,
        homonym_correct,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct OhpcReport {
    /// Scored test instances, sorted by instance id.
    pub predictions: Vec<Prediction>,
    /// Test instances of words without a model.
    pub skipped_unmodeled: Vec<String>,
    pub skipped: Skipped,
    pub sense_correct: u64,
    pub homonym_correct: u64,
    pub sense_accuracy: f64,
    pub homonym_accuracy: f64,
    /// Instances = scored predictions; exceptions = homonym errors.
    pub summary: CheckSummary,
}

impl OhpcReport {
    pub fn from_outcomes<I: IntoIterator<Item = Outcome>>(outcomes: I) -> Self {
        let mut predictions = Vec::new();
        let mut skipped_unmodeled = Vec::new();
        let mut skipped = Skipped::default();
        for o in outcomes {
            match o {
                Outcome::Ignored => {}
                Outcome::Unmapped(id) => skipped.unmapped.push(id),
                Outcome::DataError(e) => skipped.data_errors.push(e),
                Outcome::Unmodeled(id) => skipped_unmodeled.push(id),
                Outcome::Scored(p) => predictions.push(p),
            }
        }
        predictions.sort_by(|a, b| a.instance_id.cmp(&b.instance_id));
        skipped_unmodeled.sort();
        skipped.sort();
        let scored = predictions.len() as u64;
        let sense_correct = predictions.iter().filter(|p| p.sense_correct).count() as u64;
        let homonym_correct = predictions.iter().filter(|p| p.homonym_correct).count() as u64;
        let ratio = |k: u64| if scored == 0 { 0.0 } else { k as f64 / scored as f64 };
        OhpcReport {
            summary: CheckSummary::new(scored as usize, (scored - homonym_correct) as usize),
            sense_accuracy: ratio(sense_correct),
            homonym_accuracy: ratio(homonym_correct),
            sense_correct,
            homonym_correct,
            predictions,
            skipped_unmodeled,
            skipped,
        }
    }

    pub fn errors(&self) -> impl Iterator<Item = &Prediction> {
        self.predictions.iter().filter(|p| !p.homonym_correct)
    }

    /// Test instances of homonymous words with a mapped gold homonym,
    /// including unmodeled ones.
    pub fn attempted(&self) -> usize {
        self.predictions.len() + self.skipped_unmodeled.len()
    }
}

pub fn evaluate_homonym_accuracy(
    models: &Models,
    test: &AnnotatedCorpus,
    sense_map: &SenseMap,
    lexicon: &Lexicon,
) -> OhpcReport {
    OhpcReport::from_outcomes(
        (0..test.instances().len()).map(|i| evaluate_instance(models, test, i, sense_map, lexicon)),
    )
}
