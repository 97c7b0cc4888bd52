//! A built-in catalog of model pairs at known Kolmogorov distance, used to
//! exercise the bucket-witness scan across continuous, piecewise-linear and
//! lifted-discrete shapes.

use crate::error::Result;
use crate::reference::{exact_kdistance, ModelSpec, ReferenceModel};
use serde::Deserialize;
use std::path::Path;

/// Two models plus their exact Kolmogorov distance.
#[derive(Clone, Debug)]
pub struct CatalogPair {
    pub name: String,
    /// The model playing the unknown stream distribution.
    pub unknown: ReferenceModel,
    /// The model playing the reference (its quantiles define the buckets).
    pub reference: ReferenceModel,
    pub distance: f64,
}

fn pair(
    name: &str,
    unknown: ReferenceModel,
    reference: ReferenceModel,
    distance: f64,
) -> CatalogPair {
    CatalogPair {
        name: name.to_string(),
        unknown,
        reference,
        distance,
    }
}

/// Hand-built pairs, every one at distance at least 0.1. Distances are exact
/// (a unit test checks them against `exact_kdistance`).
pub fn builtin_pairs() -> Vec<CatalogPair> {
    let uniform = ReferenceModel::uniform_unit;
    let wedge = |eps, center| {
        ReferenceModel::wedge_perturb(uniform(), eps, center).expect("valid wedge parameters")
    };
    let pl = |points: &[(f64, f64)]| {
        ReferenceModel::piecewise_linear(points.to_vec()).expect("valid cdf knots")
    };
    let atoms = |atoms: &[(f64, f64)]| {
        ReferenceModel::lifted_discrete(atoms.to_vec()).expect("valid pmf atoms")
    };

    let mut pairs = Vec::new();
    for &eps in &[0.1, 0.15] {
        for &center in &[0.2, 0.37, 0.5, 0.75] {
            let name = format!("wedge-{eps}-at-{center}");
            pairs.push(pair(&name, wedge(eps, center), uniform(), eps));
        }
    }
    pairs.push(pair("wedge-0.12-at-0.3", wedge(0.12, 0.3), uniform(), 0.12));
    pairs.push(pair("wedge-0.18-at-0.6", wedge(0.18, 0.6), uniform(), 0.18));

    let skew = pl(&[(0.0, 0.0), (0.25, 0.5), (1.0, 1.0)]);
    pairs.push(pair(
        "wedge-0.1-on-skewed-base",
        ReferenceModel::wedge_perturb(skew.clone(), 0.1, 0.5).expect("valid wedge parameters"),
        skew,
        0.1,
    ));

    pairs.push(pair(
        "front-loaded-vs-uniform",
        pl(&[(0.0, 0.0), (0.3, 0.6), (1.0, 1.0)]),
        uniform(),
        0.3,
    ));
    pairs.push(pair(
        "back-loaded-vs-uniform",
        pl(&[(0.0, 0.0), (0.5, 0.25), (1.0, 1.0)]),
        uniform(),
        0.25,
    ));
    pairs.push(pair(
        "plateau-vs-uniform",
        pl(&[(0.0, 0.0), (0.2, 0.4), (0.8, 0.6), (1.0, 1.0)]),
        uniform(),
        0.2,
    ));
    pairs.push(pair(
        "mild-tilt-vs-uniform",
        pl(&[(0.0, 0.0), (0.6, 0.48), (1.0, 1.0)]),
        uniform(),
        0.12,
    ));
    pairs.push(pair(
        "s-curve-vs-uniform",
        pl(&[(0.0, 0.0), (0.25, 0.45), (0.75, 0.55), (1.0, 1.0)]),
        uniform(),
        0.2,
    ));
    pairs.push(pair(
        "opposite-tilts",
        pl(&[(0.0, 0.0), (0.5, 0.7), (1.0, 1.0)]),
        pl(&[(0.0, 0.0), (0.5, 0.3), (1.0, 1.0)]),
        0.4,
    ));
    pairs.push(pair(
        "shifted-knees",
        pl(&[(0.0, 0.0), (0.4, 0.5), (1.0, 1.0)]),
        pl(&[(0.0, 0.0), (0.6, 0.5), (1.0, 1.0)]),
        1.0 / 6.0,
    ));

    pairs.push(pair(
        "fair-coin-vs-biased-60",
        atoms(&[(0.0, 0.5), (1.0, 0.5)]),
        atoms(&[(0.0, 0.6), (1.0, 0.4)]),
        0.1,
    ));
    pairs.push(pair(
        "fair-coin-vs-biased-75",
        atoms(&[(0.0, 0.5), (1.0, 0.5)]),
        atoms(&[(0.0, 0.75), (1.0, 0.25)]),
        0.25,
    ));
    let sixth = 1.0 / 6.0;
    pairs.push(pair(
        "fair-die-vs-loaded-die",
        atoms(&[
            (1.0, sixth),
            (2.0, sixth),
            (3.0, sixth),
            (4.0, sixth),
            (5.0, sixth),
            (6.0, sixth),
        ]),
        atoms(&[
            (1.0, 0.25),
            (2.0, 0.25),
            (3.0, 0.125),
            (4.0, 0.125),
            (5.0, 0.125),
            (6.0, 0.125),
        ]),
        sixth,
    ));
    pairs.push(pair(
        "coin-support-shift",
        atoms(&[(0.0, 0.5), (1.0, 0.5)]),
        atoms(&[(0.5, 0.5), (1.5, 0.5)]),
        0.5,
    ));
    let third = 1.0 / 3.0;
    pairs.push(pair(
        "three-point-tilt",
        atoms(&[(0.0, third), (1.0, third), (2.0, third)]),
        atoms(&[(0.0, 0.2), (1.0, 0.3), (2.0, 0.5)]),
        sixth,
    ));
    pairs.push(pair(
        "three-point-reweight",
        atoms(&[(1.0, 0.5), (2.0, 0.25), (3.0, 0.25)]),
        atoms(&[(1.0, 0.4), (2.0, 0.2), (3.0, 0.4)]),
        0.15,
    ));
    pairs.push(pair(
        "coin-vs-four-point",
        atoms(&[(0.0, 0.5), (1.0, 0.5)]),
        atoms(&[(0.0, 0.25), (0.33, 0.25), (0.67, 0.25), (1.0, 0.25)]),
        0.25,
    ));
    pairs
}

#[derive(Deserialize)]
struct PairSpec {
    #[serde(default)]
    name: Option<String>,
    unknown: ModelSpec,
    reference: ModelSpec,
    #[serde(default)]
    distance: Option<f64>,
}

/// Load extra pairs from a JSON array of `{name?, unknown, reference,
/// distance?}` objects; omitted distances are computed exactly.
pub fn load_pairs(path: impl AsRef<Path>) -> Result<Vec<CatalogPair>> {
    let text = std::fs::read_to_string(path)?;
    let specs: Vec<PairSpec> =
        serde_json::from_str(&text).map_err(|e| crate::error::Error::Parse {
            line: e.line(),
            message: format!("pair list: {e}"),
        })?;
    specs
        .into_iter()
        .enumerate()
        .map(|(k, spec)| {
            let unknown = spec.unknown.build()?;
            let reference = spec.reference.build()?;
            let distance = match spec.distance {
                Some(d) => d,
                None => exact_kdistance(&unknown, &reference)?,
            };
            Ok(CatalogPair {
                name: spec.name.unwrap_or_else(|| format!("pair{}", k + 1)),
                unknown,
                reference,
                distance,
            })
        })
        .collect()
}
