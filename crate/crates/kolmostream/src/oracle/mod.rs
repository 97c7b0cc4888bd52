//! Ground-truth machinery used to verify the streaming tester.
//!
//! Everything here is computed by definition rather than by the tester's own
//! code paths: exact binomial tails by direct summation, the classical
//! Kolmogorov-Smirnov statistic over a stored sample, dyadic interval
//! decompositions in integer arithmetic, and an exhaustive scan for a bucket
//! whose probability gap certifies a distance-`eps` alternative.

mod binomial;
mod dyadic;
mod ks;
mod witness;

pub use binomial::{
    binomial_tail_exact, chernoff_bounds, BinomialTail, ChernoffBounds, MAX_EXACT_N,
};
pub use dyadic::{dyadic_decompose, DyadicDecomposition, DyadicPart, MAX_RESOLUTION};
pub use ks::{dkw_threshold, ks_statistic};
pub use witness::{lemma_witness, BucketGap, WitnessReport, MAX_SCAN_LEVELS};

#[cfg(test)]
pub(crate) use binomial::binomial_ln_pmf;
pub(crate) use binomial::null_counter_halfwidth;
