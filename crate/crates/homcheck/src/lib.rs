//! File formats, report emission and the `homcheck` command line tool for
//! the homonym hypothesis checkers in `homcheck-core`.

pub mod error;
pub mod fixtures;
pub mod formats;
pub mod models;
pub mod parallel;
pub mod report;
pub mod run;

pub use error::{Error, Result};
