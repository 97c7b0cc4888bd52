//! The ordered sample domain.
//!
//! Bucket boundaries are quantiles, and the extreme quantiles are the
//! sentinels `-inf` and `+inf`, so samples and boundaries share one totally
//! ordered type. Real-valued models produce [`Value::Real`]; lifted discrete
//! models produce [`Value::Lifted`] pairs ordered lexicographically. A real
//! `x` and a lifted pair compare as if `x` were `(x, 0)`, which keeps the
//! order total when models of both shapes appear in one computation.

use std::cmp::Ordering;
use std::fmt;

/// A point of a lifted discrete distribution: `base` is the original atom,
/// `residual` the uniform coordinate in `[0, 1)` appended by the continuity
/// lift. Lexicographic order on `(base, residual)`.
#[derive(Clone, Copy, Debug)]
pub struct LiftedValue {
    pub base: f64,
    pub residual: f64,
}

impl LiftedValue {
    pub fn new(base: f64, residual: f64) -> Self {
        debug_assert!(base.is_finite());
        debug_assert!((0.0..1.0).contains(&residual));
        LiftedValue { base, residual }
    }
}

/// A sample or bucket boundary.
#[derive(Clone, Copy, Debug)]
pub enum Value {
    /// Sentinel below every sample; the 0-quantile.
    NegInf,
    Real(f64),
    Lifted(LiftedValue),
    /// Sentinel above every sample; the 1-quantile.
    PosInf,
}

impl Value {
    pub fn lifted(base: f64, residual: f64) -> Self {
        Value::Lifted(LiftedValue::new(base, residual))
    }

    /// The real coordinate, ignoring any lift residual. Sentinels map to the
    /// infinities.
    pub fn base(&self) -> f64 {
        match self {
            Value::NegInf => f64::NEG_INFINITY,
            Value::Real(x) => *x,
            Value::Lifted(lv) => lv.base,
            Value::PosInf => f64::INFINITY,
        }
    }

    fn key(&self) -> Option<(f64, f64)> {
        match self {
            Value::NegInf | Value::PosInf => None,
            Value::Real(x) => Some((*x, 0.0)),
            Value::Lifted(lv) => Some((lv.base, lv.residual)),
        }
    }

    fn rank(&self) -> u8 {
        match self {
            Value::NegInf => 0,
            Value::Real(_) | Value::Lifted(_) => 1,
            Value::PosInf => 2,
        }
    }
}

impl PartialEq for Value {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for Value {}

impl PartialOrd for Value {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Value {
    fn cmp(&self, other: &Self) -> Ordering {
        match self.rank().cmp(&other.rank()) {
            Ordering::Equal => {}
            o => return o,
        }
        match (self.key(), other.key()) {
            (Some((a, u)), Some((b, v))) => a.total_cmp(&b).then_with(|| u.total_cmp(&v)),
            _ => Ordering::Equal, // both the same sentinel
        }
    }
}

impl fmt::Display for Value {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Value::NegInf => write!(f, "-inf"),
            Value::Real(x) => write!(f, "{x}"),
            Value::Lifted(lv) => write!(f, "({}, {})", lv.base, lv.residual),
            Value::PosInf => write!(f, "+inf"),
        }
    }
}
