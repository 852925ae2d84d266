mod common;

use std::collections::BTreeMap;

use common::*;
use homcheck_core::ohpc::{
    evaluate_homonym_accuracy, extract_features, train, training_examples, FeatureConfig, FeatureVector, Models,
    TrainScope, WordModel,
};
use homcheck_core::AnnotatedCorpus;
use proptest::prelude::*;

fn configs() -> impl Strategy<Value = FeatureConfig> {
    (0..4usize, 0..4usize, any::<bool>()).prop_map(|(positional, pos_window, bag_of_words)| FeatureConfig {
        positional,
        pos_window,
        bag_of_words,
    })
}

proptest! {
    #[test]
    fn features_ignore_gold_keys(spec in world_spec(), config in configs()) {
        let w = World::build(spec);
        // every key replaced by the word's unmapped key
        let relabelled: BTreeMap<String, Vec<String>> = w
            .corpus
            .instances()
            .iter()
            .map(|i| {
                let word = LEMMAS.iter().position(|l| *l == i.lemma).unwrap();
                (i.id.clone(), vec![orphan_key(word)])
            })
            .collect();
        let (other, _) = AnnotatedCorpus::assemble(w.raw.clone(), &relabelled).unwrap();
        for i in 0..w.corpus.instances().len() {
            prop_assert_eq!(extract_features(&w.corpus, i, &config), extract_features(&other, i, &config));
        }
    }

    #[test]
    fn homonym_accuracy_bounds_sense_accuracy(train_spec in world_spec(), test_spec in world_spec(), config in configs()) {
        let a = World::build(train_spec);
        let mut b = World::build(test_spec);
        b.spec.homonym_counts = a.spec.homonym_counts.clone();
        let b = World::build(b.spec);
        let models = train(&a.corpus, &a.lexicon, &config, TrainScope::Homonymous);
        for test in [&a, &b] {
            let r = evaluate_homonym_accuracy(&models, &test.corpus, &a.sense_map, &a.lexicon);
            prop_assert!(r.homonym_correct >= r.sense_correct);
            prop_assert!(r.homonym_accuracy >= r.sense_accuracy);
            prop_assert_eq!(r.summary.instances as usize, r.predictions.len());
        }
    }

    #[test]
    fn single_homonym_training_data_is_always_right(
        spec in world_spec(),
        config in configs(),
    ) {
        // every token of every word uses homonym 0
        let mut spec = spec;
        spec.homonym_counts = vec![2; LEMMAS.len()];
        for doc in &mut spec.docs {
            for t in doc.iter_mut() {
                t.keys = t.keys.iter().map(|&(_, s)| (0, s)).collect();
            }
        }
        let w = World::build(spec);
        let models = train(&w.corpus, &w.lexicon, &config, TrainScope::Homonymous);
        let r = evaluate_homonym_accuracy(&models, &w.corpus, &w.sense_map, &w.lexicon);
        prop_assert!(!r.predictions.is_empty());
        prop_assert_eq!(r.homonym_accuracy, 1.0);
        prop_assert!(r.skipped_unmodeled.is_empty());
    }

    #[test]
    fn training_order_does_not_matter(spec in world_spec(), config in configs(), rot in any::<prop::sample::Index>()) {
        let w = World::build(spec);
        for (word, examples) in training_examples(&w.corpus, &w.lexicon, &config, TrainScope::All) {
            let forward = WordModel::train(word.clone(), examples.iter().map(|(s, f)| (s.as_str(), f))).unwrap();
            let mut rotated = examples.clone();
            rotated.rotate_left(rot.index(examples.len()));
            rotated.reverse();
            let backward = WordModel::train(word, rotated.iter().map(|(s, f)| (s.as_str(), f))).unwrap();
            prop_assert!(forward.is_consistent());
            prop_assert_eq!(&forward, &backward);
            for (_, f) in &examples {
                let mut names: Vec<String> = f.0.iter().cloned().collect();
                names.reverse();
                let shuffled: FeatureVector = names.into_iter().collect();
                prop_assert_eq!(forward.predict(f), backward.predict(&shuffled));
            }
        }
    }

    #[test]
    fn training_is_deterministic(spec in world_spec(), config in configs()) {
        let w = World::build(spec);
        let a = train(&w.corpus, &w.lexicon, &config, TrainScope::All);
        let b = train(&w.corpus, &w.lexicon, &config, TrainScope::All);
        prop_assert_eq!(&a, &b);
        prop_assert_eq!(
            evaluate_homonym_accuracy(&a, &w.corpus, &w.sense_map, &w.lexicon),
            evaluate_homonym_accuracy(&b, &w.corpus, &w.sense_map, &w.lexicon)
        );
    }
}

#[test]
fn unmodeled_words_are_skipped_not_guessed() {
    let spec = WorldSpec {
        homonym_counts: vec![2, 2, 1, 1],
        docs: vec![vec![
            TokenSpec {
                word: 0,
                keys: vec![(0, 0)],
                targets: vec![],
                context: 0,
            },
            TokenSpec {
                word: 1,
                keys: vec![(1, 0)],
                targets: vec![],
                context: 1,
            },
        ]],
    };
    let w = World::build(spec);
    let models = train(&w.corpus, &w.lexicon, &FeatureConfig::default(), TrainScope::Homonymous);
    // drop the model for "bat"
    let models = Models::from_models(
        models.config,
        models.scope,
        models.models.into_iter().filter(|m| m.word.lemma() == "bank").collect(),
    );
    let r = evaluate_homonym_accuracy(&models, &w.corpus, &w.sense_map, &w.lexicon);
    assert_eq!(r.skipped_unmodeled, vec!["d0.s1.t1".to_owned()]);
    assert_eq!(r.predictions.len(), 1);
    assert_eq!(r.attempted(), 2);
}
