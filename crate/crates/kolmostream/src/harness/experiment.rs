//! Monte-Carlo experiments: many independent trials of the amplified tester
//! against a null model and any number of alternatives, reported as CSV.
//!
//! Trials are embarrassingly parallel and deterministic: trial `k` always
//! uses seed `base_seed + k`, shared by every hypothesis within the trial, so
//! a plan maps to byte-identical CSV no matter the thread schedule. Wall
//! times are measured per trial but deliberately kept out of the CSV for the
//! same reason.

use crate::error::{Error, Result};
use crate::harness::stream::ModelSource;
use crate::reference::{exact_kdistance, ModelSpec, ReferenceModel};
use crate::sketch::params::{Mode, TesterConfig};
use crate::sketch::tester::{amplified_test, Decision, Verdict};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::fmt::Write as _;
use std::path::Path;
use std::time::Instant;

/// An alternative hypothesis: a model, plus its exact Kolmogorov distance
/// from the null model when the caller knows it. Left out, the distance is
/// computed exactly (which fails for pairs without a closed form).
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct AltSpec {
    pub model: ModelSpec,
    #[serde(default)]
    pub distance: Option<f64>,
}

fn default_null_model() -> ModelSpec {
    ModelSpec::UniformUnit
}

fn default_trials() -> u64 {
    200
}

/// A full experiment description, deserializable from JSON.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentPlan {
    pub eps: f64,
    pub delta: f64,
    /// Sample-budget constant; defaults to the mode's own default.
    #[serde(default)]
    pub c: Option<f64>,
    pub mode: Mode,
    #[serde(default)]
    pub early_exit: bool,
    #[serde(default = "default_null_model")]
    pub null_model: ModelSpec,
    #[serde(default)]
    pub alt_models: Vec<AltSpec>,
    #[serde(default = "default_trials")]
    pub trials: u64,
    pub base_seed: u64,
}

impl ExperimentPlan {
    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Parse {
            line: e.line(),
            message: format!("experiment plan: {e}"),
        })
    }

    pub fn from_path(path: impl AsRef<Path>) -> Result<Self> {
        Self::from_json(&std::fs::read_to_string(path)?)
    }

    pub fn config(&self) -> Result<TesterConfig> {
        let mut config = TesterConfig::new(self.eps, self.delta, self.mode)?;
        if let Some(c) = self.c {
            config = config.with_c(c)?;
        }
        Ok(config.with_early_exit(self.early_exit))
    }
}

/// One row of the experiment: a single amplified run.
#[derive(Clone, Debug, Serialize)]
pub struct TrialReport {
    pub trial_index: u64,
    /// `"null"` or `"alt1"`, `"alt2"`, ... in plan order.
    pub hypothesis: String,
    /// Exact distance of the sampled model from the null model.
    pub distance: f64,
    pub verdict: Verdict,
    pub samples_consumed: u64,
    pub peak_live_words: u64,
    /// Measured but never serialized into the CSV (it would break replay).
    pub wall_time_ms: f64,
}

/// Aggregates over all trials of one hypothesis.
#[derive(Clone, Debug, Serialize)]
pub struct Summary {
    pub hypothesis: String,
    pub distance: f64,
    pub trials: u64,
    pub rejections: u64,
    pub mean_samples: f64,
    pub max_peak_words: u64,
}

impl Summary {
    pub fn reject_rate(&self) -> f64 {
        self.rejections as f64 / self.trials as f64
    }

    pub fn accept_rate(&self) -> f64 {
        1.0 - self.reject_rate()
    }
}

/// All rows plus their summaries, in deterministic order.
#[derive(Clone, Debug)]
pub struct ExperimentOutcome {
    pub reports: Vec<TrialReport>,
    pub summaries: Vec<Summary>,
}

impl ExperimentOutcome {
    /// Stable CSV: a fixed header, one row per trial and hypothesis in trial
    /// order, then one `# summary` comment line per hypothesis. Identical
    /// plans serialize to identical bytes.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("trial,hypothesis,distance,decision,samples,peak_words\n");
        for r in &self.reports {
            writeln!(
                out,
                "{},{},{},{},{},{}",
                r.trial_index,
                r.hypothesis,
                r.distance,
                r.verdict.decision,
                r.samples_consumed,
                r.peak_live_words
            )
            .expect("writing to a String cannot fail");
        }
        for s in &self.summaries {
            writeln!(
                out,
                "# summary hypothesis={} distance={} trials={} rejections={} reject_rate={:.4} mean_samples={} max_peak_words={}",
                s.hypothesis,
                s.distance,
                s.trials,
                s.rejections,
                s.reject_rate(),
                s.mean_samples,
                s.max_peak_words
            )
            .expect("writing to a String cannot fail");
        }
        out
    }

    pub fn summary_for(&self, hypothesis: &str) -> Option<&Summary> {
        self.summaries.iter().find(|s| s.hypothesis == hypothesis)
    }
}

/// Run the whole plan. Trials execute in parallel; output order is by trial
/// index, then hypothesis order within the trial.
pub fn run_experiment(plan: &ExperimentPlan) -> Result<ExperimentOutcome> {
    let config = plan.config()?;
    if plan.trials == 0 {
        return Err(Error::config("an experiment needs at least one trial"));
    }
    let null_model = plan.null_model.build()?;
    let mut hypotheses: Vec<(String, ReferenceModel, f64)> =
        vec![("null".into(), null_model.clone(), 0.0)];
    for (k, alt) in plan.alt_models.iter().enumerate() {
        let model = alt.model.build()?;
        let distance = match alt.distance {
            Some(d) => d,
            None => exact_kdistance(&model, &null_model)?,
        };
        hypotheses.push((format!("alt{}", k + 1), model, distance));
    }

    let per_trial: Vec<Vec<TrialReport>> = (0..plan.trials)
        .into_par_iter()
        .map(|trial_index| {
            let seed = plan.base_seed.wrapping_add(trial_index);
            hypotheses
                .iter()
                .map(|(name, model, distance)| {
                    let start = Instant::now();
                    let mut source = ModelSource::new(model.clone(), seed);
                    let (verdict, report) = amplified_test(config, &null_model, &mut source)?;
                    Ok(TrialReport {
                        trial_index,
                        hypothesis: name.clone(),
                        distance: *distance,
                        verdict,
                        samples_consumed: report.samples_consumed,
                        peak_live_words: report.peak_live_words,
                        wall_time_ms: start.elapsed().as_secs_f64() * 1e3,
                    })
                })
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    let reports: Vec<TrialReport> = per_trial.into_iter().flatten().collect();

    let summaries = hypotheses
        .iter()
        .map(|(name, _, distance)| {
            let rows: Vec<&TrialReport> =
                reports.iter().filter(|r| &r.hypothesis == name).collect();
            Summary {
                hypothesis: name.clone(),
                distance: *distance,
                trials: rows.len() as u64,
                rejections: rows
                    .iter()
                    .filter(|r| r.verdict.decision == Decision::Reject)
                    .count() as u64,
                mean_samples: rows.iter().map(|r| r.samples_consumed as f64).sum::<f64>()
                    / rows.len() as f64,
                max_peak_words: rows.iter().map(|r| r.peak_live_words).max().unwrap_or(0),
            }
        })
        .collect();

    Ok(ExperimentOutcome { reports, summaries })
}
