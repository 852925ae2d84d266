#![allow(dead_code)]

use std::path::Path;

use homcheck::fixtures::{generate, Fixture, FixtureConfig, Rates};
use homcheck::formats::tsv::{parse_clustering, parse_lexicon, parse_sense_map};
use homcheck_core::{AlignmentSet, AnnotatedCorpus, Lexicon, SenseClustering, SenseMap};

/// A generated fixture loaded straight into core types.
pub struct Loaded {
    pub fixture: Fixture,
    pub lexicon: Lexicon,
    pub sense_map: SenseMap,
    pub corpus: AnnotatedCorpus,
    pub test: AnnotatedCorpus,
    pub alignments: AlignmentSet,
    pub clustering: SenseClustering,
}

pub fn config(seed: u64, rate: f64) -> FixtureConfig {
    FixtureConfig {
        seed,
        rates: Rates::all(rate),
        ..FixtureConfig::default()
    }
}

pub fn load(config: &FixtureConfig) -> Loaded {
    let fixture = generate(config).unwrap();
    let p = Path::new("fixture");
    let lexicon = parse_lexicon(p, &fixture.resource).unwrap();
    let sense_map = SenseMap::build(parse_sense_map(p, &fixture.sense_map).unwrap().rows, &lexicon);
    let (corpus, _) = AnnotatedCorpus::assemble(fixture.corpus.clone(), &fixture.gold).unwrap();
    let (test, _) = AnnotatedCorpus::assemble(fixture.test_corpus.clone(), &fixture.test_gold).unwrap();
    let alignments = AlignmentSet::build(fixture.alignments.clone(), &corpus);
    let clustering = parse_clustering(p, &fixture.clusters).unwrap();
    Loaded {
        fixture,
        lexicon,
        sense_map,
        corpus,
        test,
        alignments,
        clustering,
    }
}
