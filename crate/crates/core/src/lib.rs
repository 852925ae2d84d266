//! Checkers for the homonym hypotheses over sense-annotated corpora.
//!
//! A homonymous word is a lemma/POS pair that represents two or more
//! unrelated lexemes (homonyms). This crate tests four predictions about
//! such words against annotated data:
//!
//! - [`ohpt`]: one homonym per translation, over a word-aligned bitext,
//!   plus translation-driven sense merging and the homonym-vs-cluster
//!   partitioning comparison.
//! - [`ohpd`]: one homonym per discourse (document).
//! - [`ohpc`]: one homonym per collocation, measured through a collocation
//!   feature classifier.
//! - [`ohpsc`]: one homonym per sense cluster.
//!
//! The crate is `no_std` and only needs `alloc`. Parsing files, writing
//! reports and the command line tool live in the `homcheck` crate.

#![no_std]

extern crate alloc;

#[cfg(any(feature = "std", test))]
extern crate std;

pub mod corpus;
pub mod lexicon;
pub mod ohpc;
pub mod ohpd;
pub mod ohpsc;
pub mod ohpt;
pub mod resolve;
pub mod stats;
pub mod union_find;

pub use corpus::{
    AlignmentSet, AnnotatedCorpus, AnnotatedInstance, CorpusError, CorpusStats, IdMapTable, SenseCluster,
    SenseClustering,
};
pub use lexicon::{HomonymEntry, Lexicon, LexiconError, Pos, SenseKey, SenseKeyError, SenseMap, Word};
pub use stats::{AdjudicationRecord, ContingencyTable2x2, Hypothesis, HypothesisSummary, StatsError};
