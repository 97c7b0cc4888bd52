//! Command-line front end: run the streaming tester on files or generated
//! streams, drive Monte-Carlo experiments, scan the model catalog for
//! distinguishing buckets, and compare against the offline KS baseline.
//!
//! Exit codes: 0 accept (or batch success), 1 reject (or unsatisfied
//! witness), 2 usage or runtime error.

use std::io::{self, BufReader, IsTerminal};
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{ArgGroup, Parser, Subcommand};
use kolmostream::harness::{
    builtin_pairs, load_pairs, run_experiment, CountingSource, ExperimentPlan, LiftingSource,
    LineSource, ModelSource,
};
use kolmostream::oracle::{dkw_threshold, ks_statistic, lemma_witness};
use kolmostream::reference::ModelSpec;
use kolmostream::sketch::SampleSource;
use kolmostream::{amplified_test, Decision, Mode, Result, TesterConfig};

#[derive(Parser)]
#[command(
    name = "kolmostream",
    version,
    about = "One-pass streaming identity testing in Kolmogorov distance"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Test a sample stream against a reference model.
    #[command(group(ArgGroup::new("input").required(true).args(["stream", "generate"])))]
    Test {
        /// Distance threshold in (0, 1/2].
        #[arg(long)]
        eps: f64,
        /// Failure probability in (0, 1).
        #[arg(long)]
        delta: f64,
        /// Override the sample-budget constant.
        #[arg(long)]
        c: Option<f64>,
        /// Parameter regime: `theory` (proof constants) or `practical`.
        #[arg(long, default_value = "practical")]
        mode: Mode,
        /// Reference model: `uniform-unit`, inline JSON, or a JSON file.
        #[arg(long, default_value = "uniform-unit")]
        model: String,
        /// File with one decimal sample per line; `-` reads stdin.
        #[arg(long)]
        stream: Option<String>,
        /// Generate the stream instead, sampling `--from` with this seed.
        #[arg(long, value_name = "SEED")]
        generate: Option<u64>,
        /// Model to sample under `--generate` (defaults to `--model`).
        #[arg(long, requires = "generate")]
        from: Option<String>,
        /// Finish each round as soon as every level has decided.
        #[arg(long)]
        early_exit: bool,
        /// Seed for lifting real file samples onto a lifted-discrete model.
        #[arg(long, default_value_t = 0)]
        lift_seed: u64,
        /// Print the verdict as a single JSON object.
        #[arg(long)]
        json: bool,
    },
    /// Run a JSON experiment plan and write the trials as CSV.
    Experiment {
        /// Path to the plan.
        #[arg(long)]
        plan: PathBuf,
        /// Output CSV path; `-` writes to stdout.
        #[arg(long)]
        out: String,
    },
    /// Check that catalog pairs expose a distinguishing dyadic bucket.
    LemmaCheck {
        /// Distance threshold the buckets must separate.
        #[arg(long)]
        eps: f64,
        /// Extra pairs: JSON array of `{name?, unknown, reference}`.
        #[arg(long)]
        pairs: Option<PathBuf>,
    },
    /// Offline baseline: KS statistic of a full sample vs the DKW bound.
    KsBaseline {
        /// Reference model: `uniform-unit`, inline JSON, or a JSON file.
        #[arg(long, default_value = "uniform-unit")]
        model: String,
        /// File with one decimal sample per line; `-` reads stdin.
        #[arg(long)]
        stream: String,
        /// Failure probability for the DKW threshold.
        #[arg(long, default_value_t = 0.1)]
        delta: f64,
    },
}

fn main() -> ExitCode {
    match dispatch(Cli::parse()) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}

fn dispatch(cli: Cli) -> Result<ExitCode> {
    match cli.command {
        Command::Test {
            eps,
            delta,
            c,
            mode,
            model,
            stream,
            generate,
            from,
            early_exit,
            lift_seed,
            json,
        } => cmd_test(TestArgs {
            eps,
            delta,
            c,
            mode,
            model,
            stream,
            generate,
            from,
            early_exit,
            lift_seed,
            json,
        }),
        Command::Experiment { plan, out } => cmd_experiment(&plan, &out),
        Command::LemmaCheck { eps, pairs } => cmd_lemma_check(eps, pairs.as_deref()),
        Command::KsBaseline {
            model,
            stream,
            delta,
        } => cmd_ks_baseline(&model, &stream, delta),
    }
}

struct TestArgs {
    eps: f64,
    delta: f64,
    c: Option<f64>,
    mode: Mode,
    model: String,
    stream: Option<String>,
    generate: Option<u64>,
    from: Option<String>,
    early_exit: bool,
    lift_seed: u64,
    json: bool,
}

fn open_line_source(path: &str) -> Result<Box<dyn SampleSource>> {
    if path == "-" {
        Ok(Box::new(LineSource::new(BufReader::new(io::stdin()))))
    } else {
        Ok(Box::new(LineSource::from_path(path)?))
    }
}

fn cmd_test(args: TestArgs) -> Result<ExitCode> {
    let reference = ModelSpec::parse(&args.model)?.build()?;
    let mut config = TesterConfig::new(args.eps, args.delta, args.mode)?;
    if let Some(c) = args.c {
        config = config.with_c(c)?;
    }
    config = config.with_early_exit(args.early_exit);

    let source: Box<dyn SampleSource> = match args.generate {
        Some(seed) => {
            let sampled = match &args.from {
                Some(spec) => ModelSpec::parse(spec)?.build()?,
                None => reference.clone(),
            };
            Box::new(ModelSource::new(sampled, seed))
        }
        None => {
            let path = args
                .stream
                .as_deref()
                .expect("clap guarantees one input source");
            let lines = open_line_source(path)?;
            if reference.is_real_valued() {
                lines
            } else {
                // file samples are plain reals; give them lifted coordinates
                // so they land in the lifted model's buckets
                Box::new(LiftingSource::new(lines, args.lift_seed))
            }
        }
    };
    let mut counting = CountingSource::new(source);

    let started = Instant::now();
    let (verdict, report) = amplified_test(config, &reference, &mut counting)?;
    let wall_ms = started.elapsed().as_secs_f64() * 1e3;

    if args.json {
        let out = serde_json::json!({
            "decision": verdict.decision,
            "witness": verdict.witness,
            "rounds": report.rounds,
            "accept_rounds": report.accept_rounds,
            "reject_rounds": report.reject_rounds,
            "samples_consumed": report.samples_consumed,
            "samples_fetched": counting.fetched(),
            "peak_live_words": report.peak_live_words,
            "wall_time_ms": wall_ms,
        });
        println!("{out}");
    } else {
        println!("reference: {}", reference.describe());
        println!("decision: {}", paint_decision(verdict.decision));
        if let Some(witness) = &verdict.witness {
            println!("witness: {witness}");
        }
        println!(
            "rounds: {} ({} accept, {} reject)",
            report.rounds, report.accept_rounds, report.reject_rounds
        );
        println!(
            "samples: {} consumed, {} fetched",
            report.samples_consumed,
            counting.fetched()
        );
        println!("memory: {} words peak", report.peak_live_words);
        println!("time: {wall_ms:.1} ms");
    }
    Ok(exit_for(verdict.decision))
}

fn cmd_experiment(plan_path: &std::path::Path, out: &str) -> Result<ExitCode> {
    let plan = ExperimentPlan::from_path(plan_path)?;
    let outcome = run_experiment(&plan)?;
    let csv = outcome.to_csv();
    if out == "-" {
        print!("{csv}");
    } else {
        std::fs::write(out, &csv)?;
        println!("wrote {} trial rows to {out}", outcome.reports.len());
        for s in &outcome.summaries {
            println!(
                "{}: {}/{} rejected (rate {:.4}), mean samples {:.0}, peak {} words",
                s.hypothesis,
                s.rejections,
                s.trials,
                s.reject_rate(),
                s.mean_samples,
                s.max_peak_words
            );
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn cmd_lemma_check(eps: f64, pairs_path: Option<&std::path::Path>) -> Result<ExitCode> {
    let pairs = match pairs_path {
        Some(path) => load_pairs(path)?,
        None => builtin_pairs(),
    };
    let mut unsatisfied = 0u64;
    let mut skipped = 0u64;
    for p in &pairs {
        if p.distance < eps {
            skipped += 1;
            println!(
                "{}: skipped (distance {} is below eps {eps})",
                p.name, p.distance
            );
            continue;
        }
        let report = lemma_witness(&p.unknown, &p.reference, eps)?;
        let b = &report.best;
        if report.satisfied {
            println!(
                "{}: bucket {} at level {} separates (gap {:.6} >= threshold {:.6})",
                p.name, b.index, b.level, b.gap, b.threshold
            );
        } else {
            unsatisfied += 1;
            println!(
                "{}: {} (best gap {:.6} < threshold {:.6}, bucket {} at level {})",
                p.name,
                paint("NO WITNESS", RED),
                b.gap,
                b.threshold,
                b.index,
                b.level
            );
        }
    }
    let checked = pairs.len() as u64 - skipped;
    println!(
        "{} of {} pairs have a separating bucket at eps {eps} ({} skipped)",
        checked - unsatisfied,
        checked,
        skipped
    );
    Ok(if unsatisfied == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    })
}

fn cmd_ks_baseline(model: &str, stream: &str, delta: f64) -> Result<ExitCode> {
    let reference = ModelSpec::parse(model)?.build()?;
    let mut source = open_line_source(stream)?;
    let mut samples = Vec::new();
    while let Some(v) = source.next_sample()? {
        samples.push(v.base());
    }
    let stat = ks_statistic(&samples, &reference)?;
    let threshold = dkw_threshold(samples.len() as u64, delta)?;
    let decision = if stat > threshold {
        Decision::Reject
    } else {
        Decision::Accept
    };
    println!("n: {}", samples.len());
    println!("ks statistic: {stat:.6}");
    println!("dkw threshold (delta {delta}): {threshold:.6}");
    println!("decision: {}", paint_decision(decision));
    Ok(exit_for(decision))
}

fn exit_for(decision: Decision) -> ExitCode {
    match decision {
        Decision::Accept => ExitCode::SUCCESS,
        Decision::Reject => ExitCode::from(1),
    }
}

const GREEN: &str = "32";
const RED: &str = "31";

fn paint(word: &str, code: &str) -> String {
    if std::env::var_os("NO_COLOR").is_none() && io::stdout().is_terminal() {
        format!("\x1b[{code}m{word}\x1b[0m")
    } else {
        word.to_string()
    }
}

fn paint_decision(decision: Decision) -> String {
    match decision {
        Decision::Accept => paint("accept", GREEN),
        Decision::Reject => paint("reject", RED),
    }
}
