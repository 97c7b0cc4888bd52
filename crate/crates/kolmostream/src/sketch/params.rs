//! Tester configuration and the per-level parameter schedule.
//!
//! A configuration fixes the distance threshold `eps`, the failure budget
//! `delta`, the sample-budget constant `c`, and a mode. Everything else is
//! derived: the number of levels `J`, the scale `L = lg(1/eps) + 3`, the batch
//! width `ceil(L^3)`, and for each level `j` the sample count `t_j` and the
//! rejection half-width `delta_j`.

use crate::error::{Error, Result};
use crate::oracle::null_counter_halfwidth;
use serde::{Deserialize, Serialize};
use std::fmt;
use std::str::FromStr;

/// Sample-budget constant large enough that every inequality used in the
/// correctness analysis holds; see `theory_constant_clears_every_inequality`.
pub const THEORY_C: f64 = 2.4e5;

/// Desk-scale default. Far below [`THEORY_C`], so practical mode replaces the
/// analytic rejection half-width with a calibrated one (see [`Mode`]).
pub const PRACTICAL_C: f64 = 4.0;

/// Fixed state words outside the per-level counter and boundary arrays: the
/// global sample counter, the per-round fetch counter, rounds completed,
/// accept and reject tallies, the count of unfinished levels, and a two-word
/// witness slot.
pub const BOOKKEEPING_WORDS: u64 = 8;

/// Smallest supported `eps`. Below this the sample budgets stop fitting in a
/// 64-bit counter comfortably and the level scan stops being desk-scale.
pub const MIN_EPS: f64 = 1e-6;

/// Total two-sided false-rejection probability that practical-mode
/// calibration budgets across all buckets of all levels.
const CALIBRATION_BUDGET: f64 = 0.05;

/// How the per-level rejection half-width `delta_j` is chosen.
///
/// * `Theory`: the analytic formula `max(eps/j^2, eps/L)/20`, whose
///   correctness proof needs `c` on the order of [`THEORY_C`].
/// * `Practical`: the same formula, floored at the exact binomial noise level
///   of a null counter, so that small `c` (few samples, hence a noisy
///   `Z/t_j`) does not drown the test in false rejections. The floor is the
///   smallest half-width whose null exceedance probability fits a per-bucket
///   share of [`CALIBRATION_BUDGET`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Mode {
    Theory,
    Practical,
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Mode::Theory => write!(f, "theory"),
            Mode::Practical => write!(f, "practical"),
        }
    }
}

impl FromStr for Mode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "theory" => Ok(Mode::Theory),
            "practical" => Ok(Mode::Practical),
            other => Err(Error::config(format!(
                "unknown mode {other:?}, expected \"theory\" or \"practical\""
            ))),
        }
    }
}

/// Number of levels `J = ceil(lg(1/eps)) + 2`.
pub fn levels_for(eps: f64) -> u32 {
    (-eps.log2()).ceil() as u32 + 2
}

/// The scale `L = lg(1/eps) + 3`.
pub fn scale_for(eps: f64) -> f64 {
    -eps.log2() + 3.0
}

/// Analytic rejection half-width `max(eps/j^2, eps/L)/20` at level `j`.
pub fn analytic_slack(eps: f64, j: u32) -> f64 {
    let jf = j as f64;
    (eps / (jf * jf)).max(eps / scale_for(eps)) / 20.0
}

/// Full tester configuration.
#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
pub struct TesterConfig {
    /// Distance threshold, in `(0, 1/2]` (and at least [`MIN_EPS`]).
    pub eps: f64,
    /// Failure probability, in `(0, 1)`.
    pub delta: f64,
    /// Sample-budget constant, in `(0, 1e6]`.
    pub c: f64,
    pub mode: Mode,
    /// When set, a round stops consuming samples as soon as every level has
    /// finished (which a rejection witness can cause early). Off by default
    /// so that sample accounting is an exact closed form.
    #[serde(default)]
    pub early_exit: bool,
}

impl TesterConfig {
    /// Configuration with the mode's default `c` and no early exit.
    pub fn new(eps: f64, delta: f64, mode: Mode) -> Result<Self> {
        let c = match mode {
            Mode::Theory => THEORY_C,
            Mode::Practical => PRACTICAL_C,
        };
        let config = TesterConfig {
            eps,
            delta,
            c,
            mode,
            early_exit: false,
        };
        config.validate()?;
        Ok(config)
    }

    /// Same configuration with an explicit `c`.
    pub fn with_c(mut self, c: f64) -> Result<Self> {
        self.c = c;
        self.validate()?;
        Ok(self)
    }

    /// Same configuration with early exit toggled.
    pub fn with_early_exit(mut self, early_exit: bool) -> Self {
        self.early_exit = early_exit;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.eps > 0.0 && self.eps <= 0.5) {
            return Err(Error::config(format!(
                "eps = {} outside (0, 1/2]",
                self.eps
            )));
        }
        if self.eps < MIN_EPS {
            return Err(Error::config(format!(
                "eps = {} below supported minimum {MIN_EPS}",
                self.eps
            )));
        }
        if !(self.delta > 0.0 && self.delta < 1.0) {
            return Err(Error::config(format!(
                "delta = {} outside (0, 1)",
                self.delta
            )));
        }
        if !(self.c > 0.0 && self.c <= 1e6) {
            return Err(Error::config(format!("c = {} outside (0, 1e6]", self.c)));
        }
        Ok(())
    }

    /// `J`, the number of parallel levels; at least 3 on the valid domain.
    pub fn levels(&self) -> u32 {
        levels_for(self.eps)
    }

    /// `L = lg(1/eps) + 3`.
    pub fn scale(&self) -> f64 {
        scale_for(self.eps)
    }

    /// Buckets tracked simultaneously per level: `ceil(L^3)`.
    pub fn batch_size(&self) -> u64 {
        self.scale().powi(3).ceil() as u64
    }

    /// Parameters of level `j`, `1 <= j <= J`.
    pub fn level_params(&self, j: u32) -> Result<LevelParams> {
        let levels = self.levels();
        if j < 1 || j > levels {
            return Err(Error::domain(format!("level {j} outside 1..={levels}")));
        }
        let bucket_count = 1u64 << j;
        let scale = self.scale();
        let per_level = (1.0 / (self.eps * self.eps))
            .min(scale.powi(3) / (bucket_count as f64 * self.eps * self.eps));
        let t_raw = (self.c * per_level).ceil();
        if !(t_raw >= 1.0 && t_raw <= 2f64.powi(62)) {
            return Err(Error::config(format!(
                "sample budget t_{j} = {t_raw} does not fit a counter"
            )));
        }
        let t_j = t_raw as u64;
        let analytic = analytic_slack(self.eps, j);
        let delta_j = match self.mode {
            Mode::Theory => analytic,
            Mode::Practical => {
                let budget = CALIBRATION_BUDGET / (levels as f64 * bucket_count as f64);
                let floor =
                    null_counter_halfwidth(t_j, 1.0 / bucket_count as f64, budget) / t_j as f64;
                analytic.max(floor)
            }
        };
        Ok(LevelParams {
            j,
            delta_j,
            t_j,
            batch_size: self.batch_size(),
            bucket_count,
        })
    }

    /// Parameters for every level, coarsest first.
    pub fn all_level_params(&self) -> Result<Vec<LevelParams>> {
        (1..=self.levels()).map(|j| self.level_params(j)).collect()
    }

    /// Samples one round needs: `N = max_j n_j`. Levels run in parallel on a
    /// shared stream, so the slowest level governs.
    pub fn required_samples(&self) -> Result<u64> {
        Ok(self
            .all_level_params()?
            .iter()
            .map(LevelParams::samples_needed)
            .max()
            .expect("at least three levels"))
    }

    /// Amplification rounds: one round at `delta >= 1/10`, otherwise an odd
    /// count `2*ceil(1.6*ln(1/delta)) + 1`, sized so that a majority of
    /// rounds each wrong with probability at most `1/10` fails with
    /// probability at most `delta` (Hoeffding on the round tally).
    pub fn rounds(&self) -> u64 {
        if self.delta >= 0.1 {
            1
        } else {
            2 * (1.6 * (1.0 / self.delta).ln()).ceil() as u64 + 1
        }
    }

    /// Samples a full amplified run consumes when no round exits early.
    pub fn total_samples(&self) -> Result<u64> {
        Ok(self.rounds() * self.required_samples()?)
    }

    /// Closed-form peak state size in words: per level, `batch_size` counters
    /// and `batch_size + 1` cached quantile boundaries, plus fixed
    /// bookkeeping.
    pub fn peak_words(&self) -> u64 {
        self.levels() as u64 * (2 * self.batch_size() + 1) + BOOKKEEPING_WORDS
    }
}

/// Derived parameters of one level.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct LevelParams {
    /// Level index `j`.
    pub j: u32,
    /// Rejection half-width: a batch rejects when some bucket's observed
    /// frequency `Z/t_j` satisfies `|Z/t_j - 2^-j| > delta_j`.
    pub delta_j: f64,
    /// Samples drawn per batch.
    pub t_j: u64,
    /// Buckets tracked simultaneously.
    pub batch_size: u64,
    /// Total buckets at this level, `2^j`.
    pub bucket_count: u64,
}

impl LevelParams {
    /// Batches needed to sweep all buckets; the last one may be partial.
    pub fn batches(&self) -> u64 {
        self.bucket_count.div_ceil(self.batch_size)
    }

    /// Samples this level consumes over a full sweep: `n_j = batches * t_j`.
    pub fn samples_needed(&self) -> u64 {
        self.batches() * self.t_j
    }
}
