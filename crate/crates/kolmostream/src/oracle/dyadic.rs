//! Dyadic decomposition of left-anchored intervals.
//!
//! Rounding `x` down to `m / 2^J` and scanning the bits of `m` splits
//! `(0, x]` into at most one bucket per level: bit `J - k` of `m`, when set,
//! contributes the bucket with index `2 * (m >> (J - k + 1)) + 1` at level
//! `k`. Every contributed index is odd, the buckets tile `(0, m / 2^J]`
//! without overlap, and the uncovered remainder is below `2^-J`. This is the
//! decomposition that lets per-bucket frequency control at every level add up
//! to uniform CDF control.

use crate::error::{Error, Result};

/// Finest level the decomposition supports. `x * 2^j` is exact in an `f64`
/// for any power of two, and with `j <= 52` the floor of that product is
/// exact too, so the whole decomposition stays in integer arithmetic.
pub const MAX_RESOLUTION: u32 = 52;

/// One bucket `((i-1) / 2^j, i / 2^j]` contributed by the decomposition.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct DyadicPart {
    /// Bucket index `i`, always odd, in `1..=2^level`.
    pub index: u64,
    /// Bucket level `j`, in `1..=resolution`.
    pub level: u32,
}

impl DyadicPart {
    /// Bucket endpoints in units of `2^-resolution`.
    pub fn span_units(&self, resolution: u32) -> (u64, u64) {
        let shift = resolution - self.level;
        ((self.index - 1) << shift, self.index << shift)
    }
}

/// The decomposition of `(0, numerator / 2^resolution]` into dyadic buckets,
/// ordered by level (coarsest first).
#[derive(Clone, Debug)]
pub struct DyadicDecomposition {
    pub resolution: u32,
    /// `min(floor(x * 2^resolution), 2^resolution - 1)`; the clamp keeps
    /// `x = 1` expressible as the all-ones expansion.
    pub numerator: u64,
    pub parts: Vec<DyadicPart>,
}

impl DyadicDecomposition {
    /// The covered prefix `numerator / 2^resolution`, exact in an `f64`.
    pub fn covered(&self) -> f64 {
        self.numerator as f64 / (1u64 << self.resolution) as f64
    }

    /// Uncovered remainder `x - covered()`, in `[0, 2^-resolution]`.
    pub fn error(&self, x: f64) -> f64 {
        x - self.covered()
    }
}

/// Decompose `(0, x]` for `x` in `[0, 1]` at the given resolution.
pub fn dyadic_decompose(x: f64, resolution: u32) -> Result<DyadicDecomposition> {
    if !(1..=MAX_RESOLUTION).contains(&resolution) {
        return Err(Error::domain(format!(
            "resolution {resolution} outside 1..={MAX_RESOLUTION}"
        )));
    }
    if !(0.0..=1.0).contains(&x) {
        return Err(Error::domain(format!("x = {x} outside [0, 1]")));
    }
    let scale = (1u64 << resolution) as f64;
    let numerator = ((x * scale).floor() as u64).min((1u64 << resolution) - 1);
    let mut parts = Vec::new();
    for level in 1..=resolution {
        let bit = resolution - level;
        if numerator & (1u64 << bit) != 0 {
            parts.push(DyadicPart {
                index: 2 * (numerator >> (bit + 1)) + 1,
                level,
            });
        }
    }
    Ok(DyadicDecomposition {
        resolution,
        numerator,
        parts,
    })
}
