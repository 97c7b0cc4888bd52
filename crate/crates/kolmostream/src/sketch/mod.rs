//! The streaming tester: per-level batched bucket counters over dyadic
//! quantiles of the reference model, composed in parallel across levels and
//! amplified by majority vote.

pub mod params;
pub mod subroutine;
pub mod tester;

pub use params::{
    analytic_slack, levels_for, scale_for, LevelParams, Mode, TesterConfig, BOOKKEEPING_WORDS,
    PRACTICAL_C, THEORY_C,
};
pub use subroutine::{bucket_of, LevelSubroutine, Witness};
pub use tester::{amplified_test, Decision, RunReport, SampleSource, Tester, Verdict};
