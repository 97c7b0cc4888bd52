//! One level of the tester: a batch-sequential sweep over the `2^j` dyadic
//! quantile buckets of the reference model.
//!
//! The level holds counters for one window of consecutive buckets at a time.
//! It draws `t_j` stream samples per window, counting those that land in the
//! window, then compares every counter's frequency against the reference
//! mass `2^-j`: any deviation beyond `delta_j` is a rejection witness. If the
//! window is clean, the level slides to the next `batch_size` buckets with
//! fresh counters and fresh samples, until all buckets are swept.

use crate::error::{Error, Result};
use crate::reference::ReferenceModel;
use crate::sketch::params::LevelParams;
use crate::value::Value;
use serde::{Deserialize, Serialize};
use std::fmt;

/// A rejection certificate: bucket `index` at `level` showed observed
/// frequency `observed` with `|observed - 2^-level| > threshold`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Witness {
    pub index: u64,
    pub level: u32,
    pub observed: f64,
    pub threshold: f64,
}

impl fmt::Display for Witness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "bucket i={} at level j={}: observed frequency {:.6} vs expected {:.6} (half-width {:.6})",
            self.index,
            self.level,
            self.observed,
            2f64.powi(-(self.level as i32)),
            self.threshold
        )
    }
}

/// The bucket of `x` at level `j`: the unique `i` with
/// `q_((i-1)/2^j) < x <= q_(i/2^j)` under the model's quantiles. Boundary
/// hits go to the left bucket (buckets are right-closed).
pub fn bucket_of(model: &ReferenceModel, j: u32, x: Value) -> u64 {
    debug_assert!((1..=52).contains(&j));
    let count = 1u64 << j;
    // smallest i with x <= q_(i / 2^j); quantiles are monotone in i
    let mut lo = 1u64;
    let mut hi = count;
    while lo < hi {
        let mid = lo + (hi - lo) / 2;
        let edge = model
            .quantile(mid as f64 / count as f64)
            .expect("interior quantiles are total on valid models");
        if x <= edge {
            hi = mid;
        } else {
            lo = mid + 1;
        }
    }
    lo
}

/// State of one level's sweep.
#[derive(Clone, Debug)]
pub struct LevelSubroutine {
    params: LevelParams,
    /// Index of the first bucket in the active window, 1-based.
    batch_start: u64,
    /// Buckets in the active window: `batch_size`, except a final partial
    /// window covering whatever remains.
    active_len: u64,
    /// Quantile edges of the active window; entries `0..=active_len` are
    /// meaningful. Allocated once at full width so the level's footprint is
    /// fixed for its whole life.
    boundaries: Vec<Value>,
    /// One counter per window slot; entries `0..active_len` are meaningful.
    counters: Vec<u64>,
    seen_in_batch: u64,
    finished: bool,
    witness: Option<Witness>,
    #[cfg(test)]
    pub(crate) last_batch_counts: Option<Vec<u64>>,
}

impl LevelSubroutine {
    pub fn new(params: LevelParams, model: &ReferenceModel) -> Result<Self> {
        let mut sub = LevelSubroutine {
            params,
            batch_start: 1,
            active_len: 0,
            boundaries: vec![Value::NegInf; params.batch_size as usize + 1],
            counters: vec![0; params.batch_size as usize],
            seen_in_batch: 0,
            finished: false,
            witness: None,
            #[cfg(test)]
            last_batch_counts: None,
        };
        sub.open_window(model)?;
        Ok(sub)
    }

    pub fn params(&self) -> &LevelParams {
        &self.params
    }

    pub fn finished(&self) -> bool {
        self.finished
    }

    pub fn witness(&self) -> Option<Witness> {
        self.witness
    }

    /// Fixed footprint in words: the counter array plus the boundary array.
    pub fn live_words(&self) -> u64 {
        (self.counters.len() + self.boundaries.len()) as u64
    }

    fn open_window(&mut self, model: &ReferenceModel) -> Result<()> {
        self.active_len = self
            .params
            .batch_size
            .min(self.params.bucket_count - self.batch_start + 1);
        let denom = self.params.bucket_count as f64;
        for k in 0..=self.active_len {
            let p = (self.batch_start - 1 + k) as f64 / denom;
            self.boundaries[k as usize] = model.quantile(p)?;
        }
        for counter in &mut self.counters[..self.active_len as usize] {
            *counter = 0;
        }
        self.seen_in_batch = 0;
        Ok(())
    }

    /// Feed one sample. Every call advances the batch clock; only samples
    /// inside the active window touch a counter. On the `t_j`-th sample the
    /// window is scored and either yields a witness (finishing the level) or
    /// slides onward.
    pub fn ingest(&mut self, x: Value, model: &ReferenceModel) -> Result<()> {
        if self.finished {
            return Err(Error::state("level subroutine already finished"));
        }
        self.seen_in_batch += 1;
        let last = self.boundaries[self.active_len as usize];
        if x > self.boundaries[0] && x <= last {
            let inner = &self.boundaries[1..=self.active_len as usize];
            let slot = inner.partition_point(|edge| *edge < x);
            // x <= inner[slot] by construction; boundary hits resolve left
            self.counters[slot] += 1;
        }
        if self.seen_in_batch == self.params.t_j {
            self.score_window()?;
            if !self.finished {
                self.batch_start += self.active_len;
                if self.batch_start > self.params.bucket_count {
                    self.finished = true;
                } else {
                    self.open_window(model)?;
                }
            }
        }
        Ok(())
    }

    fn score_window(&mut self) -> Result<()> {
        #[cfg(test)]
        {
            self.last_batch_counts = Some(self.counters[..self.active_len as usize].to_vec());
        }
        let t = self.params.t_j as f64;
        let expected = 1.0 / self.params.bucket_count as f64;
        for slot in 0..self.active_len {
            let observed = self.counters[slot as usize] as f64 / t;
            if (observed - expected).abs() > self.params.delta_j {
                self.witness = Some(Witness {
                    index: self.batch_start + slot,
                    level: self.params.j,
                    observed,
                    threshold: self.params.delta_j,
                });
                self.finished = true;
                return Ok(());
            }
        }
        Ok(())
    }
}
