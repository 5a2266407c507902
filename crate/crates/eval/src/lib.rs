//! Logical error rate measurement and decoder comparison reports.

mod error;
pub mod ler;
pub mod logical;
pub mod report;
pub mod stats;

pub use error::{EvalError, Result};
pub use ler::{measure_ler, measure_ler_with, FailureMode, LerConfig};
pub use logical::{is_logical_error, LogicalClassifier, Residual};
pub use report::{
    find_pseudo_threshold, sweep, write_csv, write_gnuplot, PseudoThreshold, SweepReport,
};
pub use stats::{wilson_interval, LerPoint, Z95};
