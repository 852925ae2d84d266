mod common;

use common::{config, load};
use homcheck::parallel;
use homcheck_core::ohpc::{self, FeatureConfig, TrainScope};
use homcheck_core::{ohpd, ohpsc, ohpt};
use proptest::prelude::*;

fn pool(threads: usize) -> rayon::ThreadPool {
    rayon::ThreadPoolBuilder::new().num_threads(threads).build().unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn parallel_matches_sequential(seed in 0..1000u64, rate in 0.0..0.5f64, threads in 1..9usize) {
        let w = load(&config(seed, rate));
        let cfg = FeatureConfig::default();
        pool(threads).install(|| {
            prop_assert_eq!(
                parallel::check_ohpt(&w.corpus, &w.alignments, &w.sense_map, &w.lexicon),
                ohpt::check_ohpt(&w.corpus, &w.alignments, &w.sense_map, &w.lexicon)
            );
            prop_assert_eq!(
                parallel::check_ohpd(&w.corpus, &w.sense_map, &w.lexicon),
                ohpd::check_ohpd(&w.corpus, &w.sense_map, &w.lexicon)
            );
            prop_assert_eq!(
                parallel::check_ohpsc(&w.clustering, &w.sense_map, &w.lexicon),
                ohpsc::check_ohpsc(&w.clustering, &w.sense_map, &w.lexicon)
            );
            for scope in [TrainScope::Homonymous, TrainScope::All] {
                let models = parallel::train(&w.corpus, &w.lexicon, &cfg, scope);
                prop_assert_eq!(&models, &ohpc::train(&w.corpus, &w.lexicon, &cfg, scope));
                prop_assert_eq!(
                    parallel::evaluate(&models, &w.test, &w.sense_map, &w.lexicon),
                    ohpc::evaluate_homonym_accuracy(&models, &w.test, &w.sense_map, &w.lexicon)
                );
            }
            Ok(())
        })?;
    }
}

#[test]
fn pool_size_does_not_change_results() {
    let w = load(&config(7, 0.2));
    let run = |threads| {
        pool(threads).install(|| {
            (
                parallel::check_ohpt(&w.corpus, &w.alignments, &w.sense_map, &w.lexicon),
                parallel::check_ohpd(&w.corpus, &w.sense_map, &w.lexicon),
                parallel::check_ohpsc(&w.clustering, &w.sense_map, &w.lexicon),
            )
        })
    };
    assert_eq!(run(1), run(8));
}
