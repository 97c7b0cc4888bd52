//! Sample sources: seeded model generators, line-oriented files, and the
//! instrumentation wrappers the one-pass tests rely on.

use crate::error::{Error, Result};
use crate::reference::ReferenceModel;
use crate::sketch::tester::SampleSource;
use crate::value::Value;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha12Rng;
use std::fs::File;
use std::io::{BufRead, BufReader};
use std::path::Path;

/// Endless stream of draws from a model. The generator is fixed (and seeded)
/// so runs replay bit-identically across platforms.
pub struct ModelSource {
    model: ReferenceModel,
    rng: ChaCha12Rng,
}

impl ModelSource {
    pub fn new(model: ReferenceModel, seed: u64) -> Self {
        ModelSource {
            model,
            rng: ChaCha12Rng::seed_from_u64(seed),
        }
    }
}

impl SampleSource for ModelSource {
    fn next_sample(&mut self) -> Result<Option<Value>> {
        Ok(Some(self.model.sample(&mut self.rng)))
    }
}

/// Finite in-memory stream.
pub struct VecSource {
    values: Vec<Value>,
    cursor: usize,
}

impl VecSource {
    pub fn new(values: Vec<Value>) -> Self {
        VecSource { values, cursor: 0 }
    }

    pub fn from_reals(values: impl IntoIterator<Item = f64>) -> Self {
        VecSource::new(values.into_iter().map(Value::Real).collect())
    }
}

impl SampleSource for VecSource {
    fn next_sample(&mut self) -> Result<Option<Value>> {
        let v = self.values.get(self.cursor).copied();
        self.cursor += 1;
        Ok(v)
    }
}

/// Lazy line-oriented reader: one decimal sample per line, with blank lines
/// and `#` comments skipped. Parse failures carry the 1-based line number.
pub struct LineSource<R: BufRead> {
    reader: R,
    line: usize,
}

impl LineSource<BufReader<File>> {
    pub fn from_path(path: impl AsRef<Path>) -> Result<Self> {
        Ok(LineSource::new(BufReader::new(File::open(path)?)))
    }
}

impl<R: BufRead> LineSource<R> {
    pub fn new(reader: R) -> Self {
        LineSource { reader, line: 0 }
    }
}

impl<R: BufRead> SampleSource for LineSource<R> {
    fn next_sample(&mut self) -> Result<Option<Value>> {
        let mut buf = String::new();
        loop {
            buf.clear();
            if self.reader.read_line(&mut buf)? == 0 {
                return Ok(None);
            }
            self.line += 1;
            let text = buf.trim();
            if text.is_empty() || text.starts_with('#') {
                continue;
            }
            let value: f64 = text.parse().map_err(|_| Error::Parse {
                line: self.line,
                message: format!("expected a decimal sample, found {text:?}"),
            })?;
            if !value.is_finite() {
                return Err(Error::Parse {
                    line: self.line,
                    message: format!("sample {value} is not finite"),
                });
            }
            return Ok(Some(Value::Real(value)));
        }
    }
}

/// Counts fetches. The one-pass contract is that a full run pulls each
/// sample exactly once, so the count must equal the run's consumed total.
pub struct CountingSource<S> {
    inner: S,
    fetched: u64,
}

impl<S> CountingSource<S> {
    pub fn new(inner: S) -> Self {
        CountingSource { inner, fetched: 0 }
    }

    pub fn fetched(&self) -> u64 {
        self.fetched
    }
}

impl<S: SampleSource> SampleSource for CountingSource<S> {
    fn next_sample(&mut self) -> Result<Option<Value>> {
        let v = self.inner.next_sample()?;
        if v.is_some() {
            self.fetched += 1;
        }
        Ok(v)
    }
}

/// Applies the continuity lift to real-valued samples: each becomes a pair
/// with a fresh uniform residual, making them comparable against a lifted
/// discrete model's quantile boundaries. Already-lifted samples pass through.
pub struct LiftingSource<S> {
    inner: S,
    rng: ChaCha12Rng,
}

impl<S> LiftingSource<S> {
    pub fn new(inner: S, seed: u64) -> Self {
        LiftingSource {
            inner,
            rng: ChaCha12Rng::seed_from_u64(seed),
        }
    }
}

impl<S: SampleSource> SampleSource for LiftingSource<S> {
    fn next_sample(&mut self) -> Result<Option<Value>> {
        Ok(self.inner.next_sample()?.map(|v| match v {
            Value::Real(x) => Value::lifted(x, self.rng.gen_range(0.0..1.0)),
            other => other,
        }))
    }
}
