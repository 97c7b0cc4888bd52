//! Exhaustive witness-bucket search over dyadic quantile buckets.
//!
//! The tester's soundness rests on one structural fact: whenever the
//! Kolmogorov distance between an unknown distribution and the reference is
//! at least `eps`, some bucket `B_(i,j)` — the interval between consecutive
//! `2^-j`-quantiles of the reference — carries unknown-distribution mass that
//! differs from its reference mass `2^-j` by at least twice the level's
//! rejection half-width. This module certifies that fact on analytic model
//! pairs by scanning every bucket of every level with exact CDFs, which is a
//! stronger certificate than replaying any particular construction and
//! doubles as a test of the bucket arithmetic itself.

use crate::error::{Error, Result};
use crate::reference::ReferenceModel;
use crate::sketch::params::{analytic_slack, levels_for};

/// Deepest level count the exhaustive scan accepts (the scan is `Θ(1/eps)`).
pub const MAX_SCAN_LEVELS: u32 = 16;

/// One scanned bucket: its exact unknown-distribution mass, the gap to the
/// reference mass `2^-j`, and the level's detection threshold `2 * delta_j`.
#[derive(Clone, Copy, Debug)]
pub struct BucketGap {
    /// Bucket index `i` in `1..=2^level`.
    pub index: u64,
    /// Level `j`.
    pub level: u32,
    /// Exact mass of the bucket under the unknown distribution.
    pub mass: f64,
    /// `|mass - 2^-level|`.
    pub gap: f64,
    /// `2 * delta_level`, the gap a detectable bucket must reach.
    pub threshold: f64,
}

impl BucketGap {
    /// How far past (or short of) detection this bucket sits.
    pub fn margin(&self) -> f64 {
        self.gap - self.threshold
    }
}

/// Result of the exhaustive scan.
#[derive(Clone, Debug)]
pub struct WitnessReport {
    pub eps: f64,
    /// Levels scanned: `J = ceil(lg(1/eps)) + 2`.
    pub levels: u32,
    /// The bucket with the largest margin; ties go to the coarser level,
    /// then the smaller index.
    pub best: BucketGap,
    /// The best bucket of each level, coarsest first.
    pub per_level: Vec<BucketGap>,
    /// Whether the best bucket's gap reaches its threshold.
    pub satisfied: bool,
}

/// Scan all buckets of all levels, with buckets defined by the quantiles of
/// `reference` and masses measured under `unknown`. Both models must be
/// real-valued or both lifted.
pub fn lemma_witness(
    unknown: &ReferenceModel,
    reference: &ReferenceModel,
    eps: f64,
) -> Result<WitnessReport> {
    if !(eps > 0.0 && eps <= 0.5) {
        return Err(Error::domain(format!("eps = {eps} outside (0, 1/2]")));
    }
    let levels = levels_for(eps);
    if levels > MAX_SCAN_LEVELS {
        return Err(Error::domain(format!(
            "eps = {eps} needs {levels} levels; the exhaustive scan supports at most {MAX_SCAN_LEVELS}"
        )));
    }
    if unknown.is_real_valued() != reference.is_real_valued() {
        return Err(Error::UnsupportedModel(
            "witness scan needs both models real-valued or both lifted".into(),
        ));
    }
    let mut per_level = Vec::with_capacity(levels as usize);
    for j in 1..=levels {
        let bucket_count = 1u64 << j;
        let threshold = 2.0 * analytic_slack(eps, j);
        let expected = 1.0 / bucket_count as f64;
        // bucket i shares its lower edge with bucket i-1's upper edge, so
        // evaluate each quantile CDF once
        let mut lower_cdf = 0.0;
        let mut best: Option<BucketGap> = None;
        for i in 1..=bucket_count {
            let upper = reference.quantile(i as f64 / bucket_count as f64)?;
            let upper_cdf = unknown.cdf(upper);
            let mass = upper_cdf - lower_cdf;
            lower_cdf = upper_cdf;
            let gap = (mass - expected).abs();
            let candidate = BucketGap {
                index: i,
                level: j,
                mass,
                gap,
                threshold,
            };
            if best.is_none_or(|b| candidate.margin() > b.margin()) {
                best = Some(candidate);
            }
        }
        per_level.push(best.expect("every level has at least two buckets"));
    }
    let best = *per_level
        .iter()
        .reduce(|a, b| if b.margin() > a.margin() { b } else { a })
        .expect("at least three levels");
    Ok(WitnessReport {
        eps,
        levels,
        best,
        per_level,
        satisfied: best.gap >= best.threshold,
    })
}
