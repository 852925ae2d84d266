//! Parallel drivers for the checkers. Results are sorted before they leave
//! here, so output never depends on the thread count.

use homcheck_core::ohpc::{self, FeatureConfig, Models, OhpcReport, TrainScope, WordModel};
use homcheck_core::ohpd::{self, OhpdReport};
use homcheck_core::ohpsc::{self, OhpscReport};
use homcheck_core::ohpt::{self, OhptReport, WordOccurrences};
use homcheck_core::{AlignmentSet, AnnotatedCorpus, Lexicon, SenseClustering, SenseMap};
use rayon::prelude::*;

use crate::error::{Error, Result};

pub const THREADS_VAR: &str = "HOMCHECK_THREADS";

/// Thread cap from `HOMCHECK_THREADS`; `None` when unset.
pub fn thread_cap() -> Result<Option<usize>> {
    match std::env::var(THREADS_VAR) {
        Err(_) => Ok(None),
        Ok(v) if v.trim().is_empty() => Ok(None),
        Ok(v) => match v.trim().parse::<usize>() {
            Ok(n) if n > 0 => Ok(Some(n)),
            _ => Err(Error::Usage(format!(
                "{THREADS_VAR} must be a positive integer, got {v:?}"
            ))),
        },
    }
}

/// Runs `f` on a pool capped by `HOMCHECK_THREADS`.
pub fn with_pool<T: Send>(f: impl FnOnce() -> T + Send) -> Result<T> {
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(n) = thread_cap()? {
        builder = builder.num_threads(n);
    }
    let pool = builder
        .build()
        .map_err(|e| Error::Usage(format!("cannot start thread pool: {e}")))?;
    Ok(pool.install(f))
}

pub fn check_ohpt(
    corpus: &AnnotatedCorpus,
    alignments: &AlignmentSet,
    sense_map: &SenseMap,
    lexicon: &Lexicon,
) -> OhptReport {
    let (words, skipped) = ohpt::collect_occurrences(corpus, alignments, sense_map, lexicon);
    let instances = words.par_iter().flat_map_iter(WordOccurrences::check).collect();
    OhptReport::from_instances(instances, skipped)
}

pub fn check_ohpd(corpus: &AnnotatedCorpus, sense_map: &SenseMap, lexicon: &Lexicon) -> OhpdReport {
    let parts: Vec<_> = (0..corpus.documents().len())
        .into_par_iter()
        .map(|d| ohpd::check_document(corpus, d, sense_map, lexicon))
        .collect();
    OhpdReport::from_parts(parts)
}

pub fn check_ohpsc(clustering: &SenseClustering, sense_map: &SenseMap, lexicon: &Lexicon) -> OhpscReport {
    let (inside, excluded) = ohpsc::participating(clustering, lexicon);
    let verdicts = inside.par_iter().map(|c| ohpsc::check_cluster(c, sense_map)).collect();
    OhpscReport::from_verdicts(verdicts, excluded)
}

pub fn train(corpus: &AnnotatedCorpus, lexicon: &Lexicon, config: &FeatureConfig, scope: TrainScope) -> Models {
    let words: Vec<_> = corpus
        .words()
        .filter(|(w, _)| scope == TrainScope::All || lexicon.is_homonymous(w))
        .collect();
    let models: Vec<WordModel> = words
        .par_iter()
        .filter_map(|(w, indices)| {
            let examples: Vec<(String, ohpc::FeatureVector)> = indices
                .iter()
                .map(|&i| {
                    let sense = corpus.instance(i).gold_keys[0].as_str().to_owned();
                    (sense, ohpc::extract_features(corpus, i, config))
                })
                .collect();
            WordModel::train((*w).clone(), examples.iter().map(|(s, f)| (s.as_str(), f)))
        })
        .collect();
    Models::from_models(*config, scope, models)
}

pub fn evaluate(models: &Models, test: &AnnotatedCorpus, sense_map: &SenseMap, lexicon: &Lexicon) -> OhpcReport {
    let outcomes: Vec<_> = (0..test.instances().len())
        .into_par_iter()
        .map(|i| ohpc::evaluate_instance(models, test, i, sense_map, lexicon))
        .collect();
    OhpcReport::from_outcomes(outcomes)
}
