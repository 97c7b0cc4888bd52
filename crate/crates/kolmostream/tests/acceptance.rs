//! End-to-end acceptance gate. Each test is one criterion; together they
//! cover soundness, power, sample and space budgets, the bucket-witness
//! guarantee, the supporting oracles, the one-pass contract, and replayable
//! reporting. Every run is seeded, so the whole gate is deterministic.

use kolmostream::harness::{
    builtin_pairs, memory_report, run_experiment, AltSpec, CountingSource, ExperimentOutcome,
    ExperimentPlan, ModelSource,
};
use kolmostream::oracle::{
    binomial_tail_exact, chernoff_bounds, dkw_threshold, dyadic_decompose, ks_statistic,
    lemma_witness, BinomialTail,
};
use kolmostream::reference::ModelSpec;
use kolmostream::sketch::PRACTICAL_C;
use kolmostream::{amplified_test, Mode, ReferenceModel, TesterConfig};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha12Rng;
use std::time::Instant;

fn uniform() -> ReferenceModel {
    ReferenceModel::uniform_unit()
}

fn wedge_spec(eps: f64, center: f64) -> ModelSpec {
    ModelSpec::WedgePerturbed {
        base: Box::new(ModelSpec::UniformUnit),
        eps,
        center,
    }
}

fn practical(eps: f64, delta: f64) -> TesterConfig {
    TesterConfig::new(eps, delta, Mode::Practical).unwrap()
}

/// 200 seeded trials of the eps=0.1, delta=0.1 tester against the null and
/// two wedge alternatives, shared by the error-rate criteria.
fn wedge_bench() -> ExperimentOutcome {
    let plan = ExperimentPlan {
        eps: 0.1,
        delta: 0.1,
        c: None,
        mode: Mode::Practical,
        early_exit: false,
        null_model: ModelSpec::UniformUnit,
        alt_models: vec![
            AltSpec {
                model: wedge_spec(0.1, 0.5),
                distance: Some(0.1),
            },
            AltSpec {
                model: wedge_spec(0.2, 0.5),
                distance: Some(0.2),
            },
        ],
        trials: 200,
        base_seed: 2026,
    };
    run_experiment(&plan).unwrap()
}

#[test]
fn criterion_01_type_i_error_rate() {
    let outcome = wedge_bench();
    let null = outcome.summary_for("null").unwrap();
    assert_eq!(null.trials, 200);
    let rate = null.reject_rate();
    println!("criterion 1 (type-I error): null rejection rate {rate:.4} <= 0.17");
    assert!(rate <= 0.17, "null rejection rate {rate} exceeds 0.17");
}

#[test]
fn criterion_02_power_at_and_beyond_eps() {
    let outcome = wedge_bench();
    let at_eps = outcome.summary_for("alt1").unwrap().accept_rate();
    let beyond = outcome.summary_for("alt2").unwrap().accept_rate();
    println!(
        "criterion 2 (power): acceptance {at_eps:.4} <= 0.17 at distance 0.1, \
         {beyond:.4} <= 0.05 at distance 0.2"
    );
    assert!(
        at_eps <= 0.17,
        "acceptance rate {at_eps} at distance 0.1 exceeds 0.17"
    );
    assert!(
        beyond <= 0.05,
        "acceptance rate {beyond} at distance 0.2 exceeds 0.05"
    );
}

#[test]
fn criterion_03_sample_complexity_closed_form() {
    for (k, &eps) in [0.1, 0.05, 0.02, 0.01].iter().enumerate() {
        let config = practical(eps, 0.1);
        let rounds = config.rounds();
        // recompute the per-level budget from scratch: a level sweeps
        // ceil(2^j / batch_size) windows of t_j fresh samples each
        let mut slowest = 0u64;
        for params in config.all_level_params().unwrap() {
            let windows = (1u64 << params.j).div_ceil(params.batch_size);
            slowest = slowest.max(windows * params.t_j);
        }
        let mut source = ModelSource::new(uniform(), 31 + k as u64);
        let (_, report) = amplified_test(config, &uniform(), &mut source).unwrap();
        assert_eq!(
            report.samples_consumed,
            rounds * slowest,
            "eps {eps}: consumption differs from the closed form"
        );
        let budget = 2.0 * PRACTICAL_C * rounds as f64 / (eps * eps);
        assert!(
            (report.samples_consumed as f64) <= budget,
            "eps {eps}: {} samples exceed 2c·rounds/eps^2 = {budget}",
            report.samples_consumed
        );
        println!(
            "criterion 3 (samples): eps {eps}: consumed {} = rounds x {slowest} <= {budget}",
            report.samples_consumed
        );
    }
}

#[test]
fn criterion_04_space_closed_form_and_polylog_ratio() {
    for (k, &eps) in [0.1, 0.05, 0.01].iter().enumerate() {
        let config = practical(eps, 0.1);
        let mut source = ModelSource::new(uniform(), 47 + k as u64);
        let (_, report) = amplified_test(config, &uniform(), &mut source).unwrap();
        assert_eq!(
            report.peak_live_words,
            memory_report(&config),
            "eps {eps}: instrumented peak differs from the closed form"
        );
        // polylog scaling: constant ratio against (lg(1/eps) + 3)^4
        let l = (1.0 / eps).log2() + 3.0;
        let ratio = report.peak_live_words as f64 / l.powi(4);
        println!(
            "criterion 4 (space): eps {eps}: peak {} words, ratio {ratio:.3} <= 16",
            report.peak_live_words
        );
        assert!(ratio <= 16.0, "eps {eps}: ratio {ratio} exceeds 16");
    }
}

#[test]
fn criterion_05_witness_catalog_certification() {
    let started = Instant::now();
    let pairs = builtin_pairs();
    assert!(pairs.len() >= 20, "catalog has only {} pairs", pairs.len());
    for eps in [0.1, 0.05, 0.02] {
        for p in &pairs {
            assert!(
                p.distance >= eps,
                "{} (distance {}) cannot be tested at eps {eps}",
                p.name,
                p.distance
            );
            let report = lemma_witness(&p.unknown, &p.reference, eps).unwrap();
            assert!(
                report.satisfied,
                "{} at eps {eps}: best gap {} below threshold {}",
                p.name, report.best.gap, report.best.threshold
            );
        }
    }
    let elapsed = started.elapsed();
    println!(
        "criterion 5 (witness catalog): {} pairs x 3 eps certified in {:.2?}",
        pairs.len(),
        elapsed
    );
    assert!(
        elapsed.as_secs_f64() < 5.0,
        "catalog scan took {elapsed:.2?}"
    );
}

#[test]
fn criterion_06_chernoff_domination_grid() {
    let ns = [10u64, 25, 60, 150, 400, 800, 1400, 2000];
    let ps = [
        0.04,
        0.08,
        1.0 / 7.0,
        0.2,
        0.3,
        1.0 / 3.0,
        0.45,
        0.5,
        0.6,
        0.7,
        0.8,
    ];
    let deltas = [0.005, 0.01, 0.02, 0.035, 0.06, 0.1, 0.16, 0.25];
    let mut points = 0u64;
    for &n in &ns {
        for &p in &ps {
            for &delta in &deltas {
                // preconditions: lower/two-sided need delta < p, the upper
                // tail threshold must stay below n
                if delta >= p || p + delta >= 1.0 {
                    continue;
                }
                points += 1;
                let bounds = chernoff_bounds(n, p, delta).unwrap();
                let nf = n as f64;
                let upper =
                    binomial_tail_exact(n, p, BinomialTail::Above(nf * (p + delta))).unwrap();
                let lower =
                    binomial_tail_exact(n, p, BinomialTail::Below(nf * (p - delta))).unwrap();
                let two_sided =
                    binomial_tail_exact(n, p, BinomialTail::AbsFromMean(nf * delta)).unwrap();
                assert!(
                    bounds.upper >= upper,
                    "upper bound {} below exact tail {upper} at (n={n}, p={p}, delta={delta})",
                    bounds.upper
                );
                assert!(
                    bounds.lower >= lower,
                    "lower bound {} below exact tail {lower} at (n={n}, p={p}, delta={delta})",
                    bounds.lower
                );
                assert!(
                    bounds.two_sided >= two_sided,
                    "two-sided bound {} below exact tail {two_sided} at (n={n}, p={p}, delta={delta})",
                    bounds.two_sided
                );
            }
        }
    }
    println!("criterion 6 (Chernoff domination): {points} grid points, zero violations");
    assert!(points >= 500, "grid has only {points} valid points");
}

#[test]
fn criterion_07_dyadic_decomposition_exactness() {
    let mut rng = ChaCha12Rng::seed_from_u64(0xD7AD);
    for _ in 0..10_000 {
        let resolution = rng.gen_range(4u32..=16);
        let x: f64 = rng.gen_range(0.0..=1.0);
        let d = dyadic_decompose(x, resolution).unwrap();
        assert!(
            d.parts.len() <= resolution as usize,
            "{} parts at resolution {resolution}",
            d.parts.len()
        );
        // exact integer tiling of (0, numerator]: contiguous, gap-free
        let mut offset = 0u64;
        for part in &d.parts {
            let (start, end) = part.span_units(resolution);
            assert_eq!(start, offset, "gap before bucket {part:?} of x = {x}");
            offset = end;
        }
        assert_eq!(offset, d.numerator, "tiling misses mass for x = {x}");
        let err = d.error(x);
        let unit = 0.5f64.powi(resolution as i32);
        assert!(
            (0.0..=unit).contains(&err),
            "error {err} outside [0, 2^-{resolution}]"
        );
    }
    println!("criterion 7 (dyadic decomposition): 10000 random tilings exact");
}

#[test]
fn criterion_08_ks_dkw_baseline() {
    let trials = 500u64;
    let n = 1000usize;
    let reference = uniform();
    let wedge = ReferenceModel::wedge_perturb(uniform(), 0.1, 0.5).unwrap();
    let dkw = dkw_threshold(n as u64, 0.1).unwrap();

    let rejection_rate = |source: &ReferenceModel, salt: u64| {
        let mut rejects = 0u64;
        for trial in 0..trials {
            let mut rng = ChaCha12Rng::seed_from_u64(salt + trial);
            let sample: Vec<f64> = (0..n).map(|_| source.sample(&mut rng).base()).collect();
            if ks_statistic(&sample, &reference).unwrap() > dkw {
                rejects += 1;
            }
        }
        rejects as f64 / trials as f64
    };

    let null_rate = rejection_rate(&reference, 0x8A5E);
    let slack = 3.0 * (0.1f64 * 0.9 / trials as f64).sqrt();
    println!(
        "criterion 8 (KS baseline): null rejection {null_rate:.4} <= {:.4}, ",
        0.1 + slack
    );
    assert!(
        null_rate <= 0.1 + slack,
        "null rejection {null_rate} above 0.1 + 3 sigma"
    );

    let power = rejection_rate(&wedge, 0x8A5F);
    println!("criterion 8 (KS baseline): power {power:.4} >= 0.95 at distance 0.1");
    assert!(power >= 0.95, "KS power {power} below 0.95");
}

#[test]
fn criterion_09_one_pass_contract() {
    let config = practical(0.1, 0.01);
    assert_eq!(config.rounds(), 17);
    let mut counting = CountingSource::new(ModelSource::new(uniform(), 99));
    let (_, report) = amplified_test(config, &uniform(), &mut counting).unwrap();
    // every fetched sample is ingested exactly once across all 17 rounds
    assert_eq!(counting.fetched(), report.samples_consumed);
    assert_eq!(report.samples_consumed, 17 * 400);
    println!(
        "criterion 9 (one pass): {} fetches for {} ingested samples",
        counting.fetched(),
        report.samples_consumed
    );
}

#[test]
fn criterion_10_reproducible_csv() {
    let plan = ExperimentPlan {
        eps: 0.1,
        delta: 0.1,
        c: None,
        mode: Mode::Practical,
        early_exit: false,
        null_model: ModelSpec::UniformUnit,
        alt_models: vec![AltSpec {
            model: wedge_spec(0.15, 0.37),
            distance: Some(0.15),
        }],
        trials: 40,
        base_seed: 424242,
    };
    let first = run_experiment(&plan).unwrap().to_csv();
    let second = run_experiment(&plan).unwrap().to_csv();
    assert_eq!(first, second, "same plan, different CSV bytes");
    // and stable across processes and toolchains, not just within one run
    let golden = include_str!("golden/experiment_small.csv");
    assert_eq!(first, golden, "CSV drifted from the committed golden file");
    println!(
        "criterion 10 (reproducibility): {} CSV bytes replay byte-identically",
        first.len()
    );
}
