//! One-pass streaming identity testing with respect to the Kolmogorov distance.
//!
//! Given sample access to an unknown distribution `D` and full knowledge of a
//! reference distribution `D*`, the tester accepts when `D = D*` and rejects
//! when the Kolmogorov distance (the sup-norm between CDFs) is at least `eps`,
//! each with probability at least `1 - delta`. It reads the stream once and
//! keeps only polylogarithmically many words of state: per dyadic quantile
//! level it holds one batch of bucket counters at a time, so memory never
//! scales with the stream length.
//!
//! The crate is organised around four pieces:
//!
//! * [`reference`] — reference distribution models (uniform, piecewise-linear
//!   CDFs, lifted discrete distributions, wedge perturbations) with exact CDF,
//!   quantile, sampling, and exact Kolmogorov distance between models.
//! * [`sketch`] — the streaming tester itself: level parameters, per-level
//!   batched bucket counters, the single-pass state machine, and majority
//!   amplification.
//! * [`oracle`] — ground-truth machinery used to verify the tester: the
//!   classical Kolmogorov-Smirnov statistic and DKW threshold, dyadic interval
//!   decompositions, exact binomial tails against Chernoff bounds, and an
//!   exhaustive bucket-witness search.
//! * [`harness`] — stream adapters, the Monte-Carlo experiment runner with CSV
//!   reporting, memory accounting, and the analytic model catalog.

pub mod error;
pub mod harness;
pub mod oracle;
pub mod reference;
pub mod sketch;
pub mod value;

pub use error::{Error, Result};
pub use reference::ReferenceModel;
pub use sketch::{
    amplified_test, Decision, LevelParams, Mode, Tester, TesterConfig, Verdict, Witness,
};
pub use value::{LiftedValue, Value};
