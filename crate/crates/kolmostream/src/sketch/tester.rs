//! The full tester: all levels in parallel on one stream, plus majority
//! amplification over sequential rounds.

use crate::error::{Error, Result};
use crate::reference::ReferenceModel;
use crate::sketch::params::{TesterConfig, BOOKKEEPING_WORDS};
use crate::sketch::subroutine::{LevelSubroutine, Witness};
use crate::value::Value;
use serde::{Deserialize, Serialize};

/// Where samples come from. `Ok(None)` means the stream ended; errors carry
/// parse or IO failures from file-backed sources.
pub trait SampleSource {
    fn next_sample(&mut self) -> Result<Option<Value>>;
}

impl<S: SampleSource + ?Sized> SampleSource for Box<S> {
    fn next_sample(&mut self) -> Result<Option<Value>> {
        (**self).next_sample()
    }
}

impl<S: SampleSource + ?Sized> SampleSource for &mut S {
    fn next_sample(&mut self) -> Result<Option<Value>> {
        (**self).next_sample()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Decision {
    Accept,
    Reject,
}

impl std::fmt::Display for Decision {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Decision::Accept => write!(f, "accept"),
            Decision::Reject => write!(f, "reject"),
        }
    }
}

/// Outcome of a test. A witness is present exactly when the decision is
/// reject; the constructors enforce this.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Verdict {
    pub decision: Decision,
    pub witness: Option<Witness>,
}

impl Verdict {
    pub fn accept() -> Self {
        Verdict {
            decision: Decision::Accept,
            witness: None,
        }
    }

    pub fn reject(witness: Witness) -> Self {
        Verdict {
            decision: Decision::Reject,
            witness: Some(witness),
        }
    }

    pub fn is_accept(&self) -> bool {
        self.decision == Decision::Accept
    }
}

/// One-pass tester over a single round: every ingested sample is routed to
/// each still-running level and then dropped.
#[derive(Clone, Debug)]
pub struct Tester {
    config: TesterConfig,
    model: ReferenceModel,
    levels: Vec<LevelSubroutine>,
    required: u64,
    samples_seen: u64,
    finalized: bool,
}

impl Tester {
    pub fn new(config: TesterConfig, model: &ReferenceModel) -> Result<Self> {
        config.validate()?;
        let levels = config
            .all_level_params()?
            .into_iter()
            .map(|params| LevelSubroutine::new(params, model))
            .collect::<Result<Vec<_>>>()?;
        Ok(Tester {
            config,
            model: model.clone(),
            levels,
            required: config.required_samples()?,
            samples_seen: 0,
            finalized: false,
        })
    }

    pub fn config(&self) -> &TesterConfig {
        &self.config
    }

    /// Samples this round needs before it can be finalized.
    pub fn required_samples(&self) -> u64 {
        self.required
    }

    pub fn samples_seen(&self) -> u64 {
        self.samples_seen
    }

    pub fn all_finished(&self) -> bool {
        self.levels.iter().all(LevelSubroutine::finished)
    }

    /// Live state in words: every level's fixed counter and boundary arrays
    /// plus the tester's own bookkeeping. Constant over the tester's life.
    pub fn live_words(&self) -> u64 {
        self.levels
            .iter()
            .map(LevelSubroutine::live_words)
            .sum::<u64>()
            + BOOKKEEPING_WORDS
    }

    /// Route one sample to every unfinished level. Samples arriving after
    /// every level has finished only advance the sample counter.
    pub fn ingest(&mut self, x: Value) -> Result<()> {
        if self.finalized {
            return Err(Error::state("tester already finalized"));
        }
        self.samples_seen += 1;
        for level in self.levels.iter_mut().filter(|l| !l.finished()) {
            level.ingest(x, &self.model)?;
        }
        Ok(())
    }

    /// Reject with the coarsest level's witness if any level rejected, accept
    /// otherwise. Errs if some level has not seen its full sample budget.
    pub fn finalize(&mut self) -> Result<Verdict> {
        if self.finalized {
            return Err(Error::state("tester already finalized"));
        }
        if !self.all_finished() {
            return Err(Error::InsufficientSamples {
                needed: self.required,
                got: self.samples_seen,
            });
        }
        self.finalized = true;
        match self.levels.iter().find_map(LevelSubroutine::witness) {
            Some(witness) => Ok(Verdict::reject(witness)),
            None => Ok(Verdict::accept()),
        }
    }
}

/// Accounting for a full amplified run.
#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
pub struct RunReport {
    pub rounds: u64,
    pub accept_rounds: u64,
    pub reject_rounds: u64,
    /// Samples pulled from the source; `rounds * required_samples` unless
    /// early exit trimmed some round.
    pub samples_consumed: u64,
    /// Peak simultaneous live words across the run; rounds are sequential,
    /// so this is one round's footprint.
    pub peak_live_words: u64,
}

/// Run `rounds(delta)` sequential fresh-sample rounds and take the majority
/// decision. The witness reported on rejection is the first rejecting
/// round's.
pub fn amplified_test<S: SampleSource + ?Sized>(
    config: TesterConfig,
    model: &ReferenceModel,
    source: &mut S,
) -> Result<(Verdict, RunReport)> {
    config.validate()?;
    let rounds = config.rounds();
    let per_round = config.required_samples()?;
    let total_needed = rounds * per_round;
    let mut consumed = 0u64;
    let mut peak = 0u64;
    let mut accept_rounds = 0u64;
    let mut reject_rounds = 0u64;
    let mut first_witness: Option<Witness> = None;
    for _ in 0..rounds {
        let mut tester = Tester::new(config, model)?;
        peak = peak.max(tester.live_words());
        while tester.samples_seen() < per_round {
            if config.early_exit && tester.all_finished() {
                break;
            }
            let x = source.next_sample()?.ok_or(Error::InsufficientSamples {
                needed: total_needed,
                got: consumed,
            })?;
            consumed += 1;
            tester.ingest(x)?;
        }
        let verdict = tester.finalize()?;
        match verdict.decision {
            Decision::Accept => accept_rounds += 1,
            Decision::Reject => {
                reject_rounds += 1;
                if first_witness.is_none() {
                    first_witness = verdict.witness;
                }
            }
        }
    }
    let verdict = if reject_rounds > accept_rounds {
        Verdict::reject(first_witness.expect("a rejecting round recorded its witness"))
    } else {
        Verdict::accept()
    };
    let report = RunReport {
        rounds,
        accept_rounds,
        reject_rounds,
        samples_consumed: consumed,
        peak_live_words: peak,
    };
    Ok((verdict, report))
}
