//! Exact binomial tails and the Chernoff bounds they are checked against.
//!
//! Tails are computed by direct summation of the pmf with each term
//! evaluated in log space, so deep tails neither underflow nor lose the
//! leading digits. The summation runs from the far end of the tail toward
//! the mode, accumulating small terms first.

use crate::error::{Error, Result};
use statrs::function::factorial::ln_binomial;

/// Largest `n` for which direct summation is considered exact and cheap.
pub const MAX_EXACT_N: u64 = 100_000;

/// Which tail of `X ~ Binomial(n, p)` to sum.
#[derive(Clone, Copy, Debug)]
pub enum BinomialTail {
    /// `P[X > a]` (strict).
    Above(f64),
    /// `P[X < b]` (strict).
    Below(f64),
    /// `P[|X - np| > d]` for a count-scale deviation `d >= 0`.
    AbsFromMean(f64),
}

/// The three multiplicative Chernoff bounds for `X ~ Binomial(n, p)`, stated
/// for a frequency-scale deviation `delta`:
///
/// * `upper`     bounds `P[X/n > p + delta]` by `exp(-delta^2 n / (2p + delta))`,
/// * `lower`     bounds `P[X/n < p - delta]` by `exp(-delta^2 n / (2p))`,
/// * `two_sided` bounds `P[|X - np| > n delta]` by `2 exp(-(n delta)^2 / (3np))`.
///
/// The lower and two-sided forms are only valid for `delta < p`, which
/// [`chernoff_bounds`] enforces.
#[derive(Clone, Copy, Debug)]
pub struct ChernoffBounds {
    pub upper: f64,
    pub lower: f64,
    pub two_sided: f64,
}

/// Exact tail probability by direct summation. `n` is capped at
/// [`MAX_EXACT_N`]; `p` must lie in `[0, 1]`.
pub fn binomial_tail_exact(n: u64, p: f64, tail: BinomialTail) -> Result<f64> {
    if n > MAX_EXACT_N {
        return Err(Error::domain(format!(
            "n = {n} exceeds exact-summation cap {MAX_EXACT_N}"
        )));
    }
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::domain(format!("p = {p} outside [0, 1]")));
    }
    match tail {
        BinomialTail::Above(a) => {
            if !a.is_finite() {
                return Err(Error::domain("tail threshold must be finite"));
            }
            Ok(sum_above(n, p, a))
        }
        BinomialTail::Below(b) => {
            if !b.is_finite() {
                return Err(Error::domain("tail threshold must be finite"));
            }
            Ok(sum_below(n, p, b))
        }
        BinomialTail::AbsFromMean(d) => {
            if d.is_nan() || d < 0.0 {
                return Err(Error::domain("absolute deviation must be nonnegative"));
            }
            let mean = n as f64 * p;
            // the two events are disjoint
            Ok(sum_below(n, p, mean - d) + sum_above(n, p, mean + d))
        }
    }
}

/// `P[X > a]`, summed from `k = n` down toward the threshold.
fn sum_above(n: u64, p: f64, a: f64) -> f64 {
    if a < 0.0 {
        return 1.0;
    }
    if a >= n as f64 {
        return 0.0;
    }
    let k_min = (a.floor() as u64) + 1;
    if p == 0.0 {
        return 0.0; // X == 0 and k_min >= 1
    }
    if p == 1.0 {
        return 1.0; // X == n > a
    }
    let mut acc = 0.0;
    let mut k = n;
    loop {
        acc += ln_pmf(n, p, k).exp();
        if k == k_min {
            break;
        }
        k -= 1;
    }
    acc.min(1.0)
}

/// `P[X < b]`, summed from `k = 0` up toward the threshold.
fn sum_below(n: u64, p: f64, b: f64) -> f64 {
    if b <= 0.0 {
        return 0.0;
    }
    if b > n as f64 {
        return 1.0;
    }
    let k_max = if b.fract() == 0.0 {
        b as u64 - 1
    } else {
        b.floor() as u64
    };
    if p == 0.0 {
        return 1.0; // X == 0 < b since b > 0
    }
    if p == 1.0 {
        return if k_max >= n { 1.0 } else { 0.0 };
    }
    let mut acc = 0.0;
    for k in 0..=k_max {
        acc += ln_pmf(n, p, k).exp();
    }
    acc.min(1.0)
}

fn ln_pmf(n: u64, p: f64, k: u64) -> f64 {
    ln_binomial(n, k) + k as f64 * p.ln() + (n - k) as f64 * (1.0 - p).ln()
}

/// Log pmf of `Binomial(n, p)` at `k`, for `0 < p < 1`. Shared with the
/// goodness-of-fit tests elsewhere in the crate.
#[cfg(test)]
pub(crate) fn binomial_ln_pmf(n: u64, p: f64, k: u64) -> f64 {
    debug_assert!(p > 0.0 && p < 1.0 && k <= n);
    ln_pmf(n, p, k)
}

/// The three Chernoff bounds at frequency deviation `delta`. Requires
/// `n >= 1`, `0 < p < 1`, and `0 < delta < p` so every returned form is in
/// its proven regime.
pub fn chernoff_bounds(n: u64, p: f64, delta: f64) -> Result<ChernoffBounds> {
    if n == 0 {
        return Err(Error::domain("need at least one trial"));
    }
    if !(p > 0.0 && p < 1.0) {
        return Err(Error::domain(format!("p = {p} outside (0, 1)")));
    }
    if delta.is_nan() || delta <= 0.0 {
        return Err(Error::domain("delta must be positive"));
    }
    if delta >= p {
        return Err(Error::domain(format!(
            "delta = {delta} must stay below p = {p} for the lower-tail form"
        )));
    }
    let nf = n as f64;
    Ok(ChernoffBounds {
        upper: (-(delta * delta * nf) / (2.0 * p + delta)).exp(),
        lower: (-(delta * delta * nf) / (2.0 * p)).exp(),
        two_sided: 2.0 * (-(nf * delta * delta) / (3.0 * p)).exp(),
    })
}

/// Smallest integer count deviation `d` with
/// `P[|X - np| > d] <= budget` for `X ~ Binomial(t, p)`.
///
/// This is the noise floor the practical tester mode puts under its per-level
/// rejection threshold. For `t` beyond the exact-summation cap a normal
/// quantile stands in; within the cap the answer is exact.
pub(crate) fn null_counter_halfwidth(t: u64, p: f64, budget: f64) -> f64 {
    debug_assert!(p > 0.0 && p < 1.0 && budget > 0.0);
    if t > MAX_EXACT_N {
        use statrs::distribution::{ContinuousCDF, Normal};
        let z = Normal::new(0.0, 1.0)
            .unwrap()
            .inverse_cdf(1.0 - budget / 2.0);
        return (z * (t as f64 * p * (1.0 - p)).sqrt()).ceil();
    }
    let mean = t as f64 * p;
    // prefix[k] = P[X <= k-1]
    let mut prefix = Vec::with_capacity(t as usize + 2);
    prefix.push(0.0);
    let mut acc = 0.0;
    for k in 0..=t {
        acc += ln_pmf(t, p, k).exp();
        prefix.push(acc.min(1.0));
    }
    let total = prefix[t as usize + 1];
    for d in 0..=t {
        let df = d as f64;
        let lo = (mean - df).ceil().max(0.0) as usize;
        let hi = (mean + df).floor().min(t as f64) as usize;
        let inside = if hi >= lo {
            prefix[hi + 1] - prefix[lo]
        } else {
            0.0
        };
        let outside = (total - inside).max(0.0);
        if outside <= budget {
            return df;
        }
    }
    t as f64
}
