//! The store-everything Kolmogorov–Smirnov baseline.
//!
//! This is what the streaming tester is measured against: sort the whole
//! sample, take the sup-norm gap between the empirical CDF and the model CDF,
//! and compare it to the Dvoretzky–Kiefer–Wolfowitz threshold. Exact, but it
//! holds all `n` samples.

use crate::error::{Error, Result};
use crate::reference::ReferenceModel;
use crate::value::Value;

/// One-sample Kolmogorov–Smirnov statistic
/// `max_i max(i/n - F(X_(i)), F(X_(i)) - (i-1)/n)` over the sorted sample.
///
/// The input need not be sorted; a copy is sorted internally. Samples must be
/// finite and nonempty.
pub fn ks_statistic(samples: &[f64], model: &ReferenceModel) -> Result<f64> {
    if samples.is_empty() {
        return Err(Error::domain("empty sample"));
    }
    if let Some(bad) = samples.iter().find(|v| !v.is_finite()) {
        return Err(Error::domain(format!("non-finite sample {bad}")));
    }
    let mut sorted = samples.to_vec();
    sorted.sort_by(f64::total_cmp);
    let n = sorted.len() as f64;
    let mut sup: f64 = 0.0;
    for (i, &x) in sorted.iter().enumerate() {
        let f = model.cdf(Value::Real(x));
        let above = (i as f64 + 1.0) / n - f;
        let below = f - i as f64 / n;
        sup = sup.max(above).max(below);
    }
    Ok(sup)
}

/// Dvoretzky–Kiefer–Wolfowitz rejection threshold `sqrt(ln(2/delta) / (2n))`:
/// under the model, `P[KS >= threshold] <= delta`.
pub fn dkw_threshold(n: u64, delta: f64) -> Result<f64> {
    if n == 0 {
        return Err(Error::domain("need at least one sample"));
    }
    if !(delta > 0.0 && delta < 1.0) {
        return Err(Error::domain(format!("delta = {delta} outside (0, 1)")));
    }
    Ok(((2.0 / delta).ln() / (2.0 * n as f64)).sqrt())
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha12Rng;

    fn assert_close(a: f64, b: f64, tol: f64) {
        assert!((a - b).abs() <= tol, "expected {b}, got {a} (tol {tol})");
    }

    #[test]
    fn small_samples_against_uniform() {
        // sorted 0.1, 0.5: the binding term is 2/2 - F(0.5) = 0.5
        let ks = ks_statistic(&[0.1, 0.5], &ReferenceModel::UniformUnit).unwrap();
        assert_close(ks, 0.5, 1e-15);
        // sorted 0.25, 0.5, 0.75: the binding term is F(X_(1)) - 0/3 = 0.25
        let ks = ks_statistic(&[0.25, 0.5, 0.75], &ReferenceModel::UniformUnit).unwrap();
        assert_close(ks, 0.25, 1e-15);
        // order of the input must not matter
        let ks2 = ks_statistic(&[0.75, 0.25, 0.5], &ReferenceModel::UniformUnit).unwrap();
        assert_eq!(ks, ks2);
        // a single sample at the median deviates by exactly one half
        let ks = ks_statistic(&[0.5], &ReferenceModel::UniformUnit).unwrap();
        assert_close(ks, 0.5, 1e-15);
    }

    /// Definition-based oracle: evaluate `|F_hat - F|` at every sample point
    /// and at its left limit (the empirical CDF only moves at sample points,
    /// and the model CDFs here are continuous in the real coordinate).
    fn sup_gap_by_definition(samples: &[f64], model: &ReferenceModel) -> f64 {
        let n = samples.len() as f64;
        let mut sup: f64 = 0.0;
        for &x in samples {
            let le = samples.iter().filter(|s| **s <= x).count() as f64;
            let lt = samples.iter().filter(|s| **s < x).count() as f64;
            let f = model.cdf(crate::value::Value::Real(x));
            sup = sup.max((le / n - f).abs()).max((lt / n - f).abs());
        }
        sup
    }

    #[test]
    fn matches_definition_based_oracle() {
        use crate::reference::ModelSpec;
        let pl = ModelSpec::PiecewiseLinearCdf {
            points: vec![(0.0, 0.0), (0.3, 0.6), (1.0, 1.0)],
        }
        .build()
        .unwrap();
        let wedge = ReferenceModel::wedge_perturb(ReferenceModel::UniformUnit, 0.15, 0.4).unwrap();
        let mut rng = ChaCha12Rng::seed_from_u64(0x7e57);
        for model in [ReferenceModel::UniformUnit, pl, wedge] {
            for source in [
                ReferenceModel::UniformUnit,
                ReferenceModel::wedge_perturb(ReferenceModel::UniformUnit, 0.2, 0.6).unwrap(),
            ] {
                let samples: Vec<f64> = (0..500).map(|_| source.sample(&mut rng).base()).collect();
                let ks = ks_statistic(&samples, &model).unwrap();
                let oracle = sup_gap_by_definition(&samples, &model);
                assert_close(ks, oracle, 1e-12);
            }
        }
    }

    #[test]
    fn centered_grid_attains_half_spacing() {
        let n = 40;
        let grid: Vec<f64> = (0..n).map(|i| (i as f64 + 0.5) / n as f64).collect();
        let ks = ks_statistic(&grid, &ReferenceModel::UniformUnit).unwrap();
        assert_close(ks, 0.5 / n as f64, 1e-15);
    }

    #[test]
    fn dkw_frozen_point() {
        assert_close(dkw_threshold(1000, 0.1).unwrap(), 0.038702, 1e-6);
    }

    #[test]
    fn null_sample_stays_below_dkw() {
        let mut rng = ChaCha12Rng::seed_from_u64(0x517e);
        let model = ReferenceModel::UniformUnit;
        let samples: Vec<f64> = (0..10_000).map(|_| model.sample(&mut rng).base()).collect();
        let ks = ks_statistic(&samples, &model).unwrap();
        assert!(ks < dkw_threshold(10_000, 1e-3).unwrap(), "ks = {ks}");
    }

    #[test]
    fn perturbed_sample_concentrates_at_its_distance() {
        let wedge = ReferenceModel::wedge_perturb(ReferenceModel::UniformUnit, 0.1, 0.5).unwrap();
        let mut rng = ChaCha12Rng::seed_from_u64(0xa1b2);
        let samples: Vec<f64> = (0..20_000).map(|_| wedge.sample(&mut rng).base()).collect();
        let ks = ks_statistic(&samples, &ReferenceModel::UniformUnit).unwrap();
        assert_close(ks, 0.1, 0.02);
        assert!(ks > dkw_threshold(20_000, 0.1).unwrap());
    }

    #[test]
    fn rejects_bad_input() {
        assert!(matches!(
            ks_statistic(&[], &ReferenceModel::UniformUnit),
            Err(Error::Domain(_))
        ));
        assert!(ks_statistic(&[0.5, f64::NAN], &ReferenceModel::UniformUnit).is_err());
        assert!(dkw_threshold(0, 0.1).is_err());
        assert!(dkw_threshold(10, 0.0).is_err());
        assert!(dkw_threshold(10, 1.0).is_err());
    }
}
