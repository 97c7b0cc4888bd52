//! Drivers around the tester: stream sources, the Monte-Carlo experiment
//! runner with CSV reporting, and the built-in catalog of analytic model
//! pairs.

pub mod catalog;
pub mod experiment;
pub mod stream;

pub use catalog::{builtin_pairs, load_pairs, CatalogPair};
pub use experiment::{
    run_experiment, AltSpec, ExperimentOutcome, ExperimentPlan, Summary, TrialReport,
};
pub use stream::{CountingSource, LiftingSource, LineSource, ModelSource, VecSource};

use crate::sketch::params::TesterConfig;

/// Closed-form prediction of the tester's peak footprint in words. The
/// instrumented peak of a run equals this exactly; the space acceptance tests
/// assert that equality.
pub fn memory_report(config: &TesterConfig) -> u64 {
    config.peak_words()
}
