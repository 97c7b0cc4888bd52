//! Reference distribution models.
//!
//! A [`ReferenceModel`] is a fully known distribution `D*`: it answers exact
//! CDF and quantile queries, draws samples by inverse transform, and supports
//! exact Kolmogorov distance against another model with a finite breakpoint
//! description. All kinds are continuous as distributions; discrete inputs
//! are carried as their continuity lift `D (x) Uniform[0,1)` under the
//! lexicographic order, which preserves Kolmogorov distance exactly.
//!
//! Quantiles follow the sup convention `q_x = sup { y : P[D* <= y] <= x }`,
//! with `q_0 = -inf` and `q_1 = +inf` as sentinels.

use crate::error::{Error, Result};
use crate::value::{LiftedValue, Value};
use rand::Rng;
use serde::{Deserialize, Serialize};

/// Weight sums may drift from 1 by at most this much before we refuse to
/// normalize silently.
const WEIGHT_SUM_SLACK: f64 = 1e-9;

/// A reference distribution with exact CDF/quantile access.
#[derive(Clone, Debug)]
pub enum ReferenceModel {
    /// Uniform on `[0, 1]`.
    UniformUnit,
    /// Continuous distribution given by a piecewise-linear CDF.
    PiecewiseLinear(PiecewiseLinear),
    /// Discrete pmf carried as its continuity lift.
    LiftedDiscrete(LiftedDiscrete),
    /// A base model with its probability scale bent by a wedge; see
    /// [`ReferenceModel::wedge_perturb`].
    Wedge(Wedge),
}

/// Piecewise-linear CDF through `points`; 0 before the first knot, 1 after
/// the last. Knot x-coordinates are strictly increasing, CDF values
/// nondecreasing from exactly 0 to exactly 1, so the distribution is
/// continuous (no vertical jumps).
#[derive(Clone, Debug)]
pub struct PiecewiseLinear {
    points: Vec<(f64, f64)>,
}

/// Continuity lift of a finite pmf. Mass `w_i` at atom `a_i` becomes uniform
/// mass on the fiber `{a_i} x [0, 1)`.
#[derive(Clone, Debug)]
pub struct LiftedDiscrete {
    atoms: Vec<f64>,
    weights: Vec<f64>,
    /// cum[i] = weights[0] + .. + weights[i]; cum.last() == 1.0 exactly.
    cum: Vec<f64>,
}

/// Wedge perturbation of a continuous base model: the CDF becomes
/// `g(F_base(x))` where `g` tilts `[0, center]` down and `[center, 1]` up so
/// that the Kolmogorov distance to the base is exactly `eps`, attained where
/// the base CDF equals `center`.
#[derive(Clone, Debug)]
pub struct Wedge {
    base: Box<ReferenceModel>,
    eps: f64,
    center: f64,
}

impl Wedge {
    /// The probability-scale distortion `g`.
    fn distort(&self, t: f64) -> f64 {
        if t <= self.center {
            t * (1.0 - self.eps / self.center)
        } else {
            (self.center - self.eps) + (t - self.center) * (1.0 + self.eps / (1.0 - self.center))
        }
    }

    fn distort_inv(&self, p: f64) -> f64 {
        let knee = self.center - self.eps;
        if p <= knee {
            p * self.center / knee
        } else {
            self.center + (p - knee) * (1.0 - self.center) / (1.0 - self.center + self.eps)
        }
    }

    pub fn eps(&self) -> f64 {
        self.eps
    }

    pub fn center(&self) -> f64 {
        self.center
    }
}

impl PiecewiseLinear {
    pub fn new(points: Vec<(f64, f64)>) -> Result<Self> {
        if points.len() < 2 {
            return Err(Error::domain(
                "piecewise-linear CDF needs at least 2 points",
            ));
        }
        let ok = points.iter().all(|(x, f)| x.is_finite() && f.is_finite());
        if !ok {
            return Err(Error::domain("knots must be finite"));
        }
        for w in points.windows(2) {
            if w[0].0 >= w[1].0 {
                return Err(Error::domain(
                    "knot x-coordinates must be strictly increasing",
                ));
            }
            if w[0].1 > w[1].1 {
                return Err(Error::domain("CDF values must be nondecreasing"));
            }
        }
        if points[0].1 != 0.0 || points[points.len() - 1].1 != 1.0 {
            return Err(Error::domain("CDF must start at 0 and end at 1"));
        }
        Ok(PiecewiseLinear { points })
    }

    fn cdf(&self, x: f64) -> f64 {
        let pts = &self.points;
        if x <= pts[0].0 {
            return if x == pts[0].0 { pts[0].1 } else { 0.0 };
        }
        if x >= pts[pts.len() - 1].0 {
            return 1.0;
        }
        // last knot with x-coordinate <= x
        let i = pts.partition_point(|p| p.0 <= x) - 1;
        let (x0, f0) = pts[i];
        let (x1, f1) = pts[i + 1];
        f0 + (x - x0) / (x1 - x0) * (f1 - f0)
    }

    /// `sup { y : F(y) <= p }` for `p` in `(0, 1)`. On a flat at level `p`
    /// this is the last knot of the flat.
    fn quantile(&self, p: f64) -> f64 {
        let pts = &self.points;
        // last knot with CDF value <= p
        let i = pts.partition_point(|q| q.1 <= p) - 1;
        let (x0, f0) = pts[i];
        if f0 == p {
            return x0;
        }
        let (x1, f1) = pts[i + 1];
        x0 + (p - f0) / (f1 - f0) * (x1 - x0)
    }
}

impl LiftedDiscrete {
    /// Builds the lift of the pmf `{atom: weight}`. Atoms may arrive in any
    /// order but must be distinct; weights must be positive and sum to 1
    /// within `1e-9` (then they are renormalized exactly).
    pub fn new(pmf: Vec<(f64, f64)>) -> Result<Self> {
        if pmf.is_empty() {
            return Err(Error::domain("pmf must have at least one atom"));
        }
        let mut pmf = pmf;
        pmf.sort_by(|a, b| a.0.total_cmp(&b.0));
        for w in pmf.windows(2) {
            if w[0].0 == w[1].0 {
                return Err(Error::domain("pmf atoms must be distinct"));
            }
        }
        if pmf
            .iter()
            .any(|(a, w)| !a.is_finite() || !w.is_finite() || *w <= 0.0)
        {
            return Err(Error::domain("atoms must be finite and weights positive"));
        }
        let total: f64 = pmf.iter().map(|(_, w)| w).sum();
        if (total - 1.0).abs() > WEIGHT_SUM_SLACK {
            return Err(Error::domain(format!("weights sum to {total}, expected 1")));
        }
        let atoms: Vec<f64> = pmf.iter().map(|(a, _)| *a).collect();
        let weights: Vec<f64> = pmf.iter().map(|(_, w)| w / total).collect();
        let mut cum = Vec::with_capacity(weights.len());
        let mut acc = 0.0;
        for w in &weights {
            acc += w;
            cum.push(acc);
        }
        *cum.last_mut().unwrap() = 1.0;
        Ok(LiftedDiscrete {
            atoms,
            weights,
            cum,
        })
    }

    pub fn atoms(&self) -> &[f64] {
        &self.atoms
    }

    /// Total weight of atoms strictly below `b`.
    fn cum_before(&self, b: f64) -> f64 {
        let i = self.atoms.partition_point(|a| *a < b);
        if i == 0 {
            0.0
        } else {
            self.cum[i - 1]
        }
    }

    /// CDF at the lifted point `(b, u)`.
    fn cdf(&self, b: f64, u: f64) -> f64 {
        let before = self.cum_before(b);
        match self.atoms.binary_search_by(|a| a.total_cmp(&b)) {
            Ok(i) => before + u * self.weights[i],
            Err(_) => before,
        }
    }

    fn quantile(&self, p: f64) -> LiftedValue {
        // first atom whose cumulative weight exceeds p
        let i = self.cum.partition_point(|c| *c <= p);
        debug_assert!(i < self.atoms.len());
        let before = if i == 0 { 0.0 } else { self.cum[i - 1] };
        LiftedValue::new(self.atoms[i], (p - before) / self.weights[i])
    }
}

impl ReferenceModel {
    /// Uniform on the unit interval.
    pub fn uniform_unit() -> Self {
        ReferenceModel::UniformUnit
    }

    pub fn piecewise_linear(points: Vec<(f64, f64)>) -> Result<Self> {
        Ok(ReferenceModel::PiecewiseLinear(PiecewiseLinear::new(
            points,
        )?))
    }

    pub fn lifted_discrete(pmf: Vec<(f64, f64)>) -> Result<Self> {
        Ok(ReferenceModel::LiftedDiscrete(LiftedDiscrete::new(pmf)?))
    }

    /// Bends `base`'s probability scale so the result sits at Kolmogorov
    /// distance exactly `eps` from `base`. Requires
    /// `0 < eps < min(center, 1 - center)`.
    pub fn wedge_perturb(base: ReferenceModel, eps: f64, center: f64) -> Result<Self> {
        if !(center > 0.0 && center < 1.0) {
            return Err(Error::domain("wedge center must lie in (0, 1)"));
        }
        if !(eps > 0.0 && eps < center.min(1.0 - center)) {
            return Err(Error::domain(
                "wedge eps must satisfy 0 < eps < min(center, 1 - center)",
            ));
        }
        Ok(ReferenceModel::Wedge(Wedge {
            base: Box::new(base),
            eps,
            center,
        }))
    }

    /// True when samples are plain reals (as opposed to lifted pairs).
    pub fn is_real_valued(&self) -> bool {
        match self {
            ReferenceModel::UniformUnit | ReferenceModel::PiecewiseLinear(_) => true,
            ReferenceModel::LiftedDiscrete(_) => false,
            ReferenceModel::Wedge(w) => w.base.is_real_valued(),
        }
    }

    /// Exact CDF at `x`. Sentinels map to 0 and 1; a lifted query against a
    /// real-valued model uses the base coordinate, and a real query against a
    /// lifted model sits at residual 0.
    pub fn cdf(&self, x: Value) -> f64 {
        match x {
            Value::NegInf => return 0.0,
            Value::PosInf => return 1.0,
            _ => {}
        }
        match self {
            ReferenceModel::UniformUnit => x.base().clamp(0.0, 1.0),
            ReferenceModel::PiecewiseLinear(pl) => pl.cdf(x.base()),
            ReferenceModel::LiftedDiscrete(ld) => match x {
                Value::Lifted(lv) => ld.cdf(lv.base, lv.residual),
                Value::Real(r) => ld.cdf(r, 0.0),
                _ => unreachable!(),
            },
            ReferenceModel::Wedge(w) => w.distort(w.base.cdf(x)),
        }
    }

    /// Quantile under the sup convention. `quantile(0)` is `-inf` and
    /// `quantile(1)` is `+inf`; arguments outside `[0, 1]` are a domain
    /// error.
    pub fn quantile(&self, p: f64) -> Result<Value> {
        if !(0.0..=1.0).contains(&p) {
            return Err(Error::domain(format!(
                "quantile argument {p} outside [0, 1]"
            )));
        }
        if p == 0.0 {
            return Ok(Value::NegInf);
        }
        if p == 1.0 {
            return Ok(Value::PosInf);
        }
        Ok(match self {
            ReferenceModel::UniformUnit => Value::Real(p),
            ReferenceModel::PiecewiseLinear(pl) => Value::Real(pl.quantile(p)),
            ReferenceModel::LiftedDiscrete(ld) => Value::Lifted(ld.quantile(p)),
            ReferenceModel::Wedge(w) => w.base.quantile(w.distort_inv(p))?,
        })
    }

    /// Inverse-transform sample: one uniform draw per sample. For lifted
    /// models the same draw determines both the atom and the lift residual,
    /// so a single seed reproduces the full lifted stream.
    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> Value {
        let u = loop {
            let u: f64 = rng.gen();
            if u > 0.0 {
                break u;
            }
        };
        self.quantile(u)
            .expect("open-interval draw cannot leave the quantile domain")
    }

    /// Breakpoints of the CDF when the model is piecewise linear over the
    /// reals; `None` for lifted models.
    fn real_breakpoints(&self) -> Option<Vec<f64>> {
        match self {
            ReferenceModel::UniformUnit => Some(vec![0.0, 1.0]),
            ReferenceModel::PiecewiseLinear(pl) => {
                Some(pl.points.iter().map(|(x, _)| *x).collect())
            }
            ReferenceModel::LiftedDiscrete(_) => None,
            ReferenceModel::Wedge(w) => {
                let mut bp = w.base.real_breakpoints()?;
                // the distortion kink lands where the base CDF crosses center
                if let Ok(Value::Real(xc)) = w.base.quantile(w.center) {
                    bp.push(xc);
                }
                Some(bp)
            }
        }
    }

    /// A short human-readable description used in reports.
    pub fn describe(&self) -> String {
        match self {
            ReferenceModel::UniformUnit => "uniform-unit".to_string(),
            ReferenceModel::PiecewiseLinear(pl) => {
                format!("piecewise-linear-cdf({} knots)", pl.points.len())
            }
            ReferenceModel::LiftedDiscrete(ld) => {
                format!("discrete-pmf-lifted({} atoms)", ld.atoms.len())
            }
            ReferenceModel::Wedge(w) => {
                format!(
                    "wedge-perturbed({}, eps={}, center={})",
                    w.base.describe(),
                    w.eps,
                    w.center
                )
            }
        }
    }
}

/// Exact Kolmogorov distance `sup_x |F_a(x) - F_b(x)|` between two models.
///
/// Both models must be piecewise linear over the reals, or both lifted
/// discrete. For piecewise-linear CDFs the difference is linear between
/// consecutive breakpoints of either model, so the supremum is attained on
/// the union of breakpoints; for lifted pairs it is attained at a fiber
/// endpoint of one of the atoms. Mixed pairs are unsupported because the
/// supremum over the mixed order need not be attained.
pub fn exact_kdistance(a: &ReferenceModel, b: &ReferenceModel) -> Result<f64> {
    match (a.real_breakpoints(), b.real_breakpoints()) {
        (Some(mut xs), Some(ys)) => {
            xs.extend(ys);
            xs.sort_by(f64::total_cmp);
            xs.dedup();
            let mut best = 0.0f64;
            for x in xs {
                let d = (a.cdf(Value::Real(x)) - b.cdf(Value::Real(x))).abs();
                best = best.max(d);
            }
            Ok(best)
        }
        (None, None) => match (a, b) {
            (ReferenceModel::LiftedDiscrete(da), ReferenceModel::LiftedDiscrete(db)) => {
                let mut atoms: Vec<f64> = da.atoms.iter().chain(db.atoms.iter()).copied().collect();
                atoms.sort_by(f64::total_cmp);
                atoms.dedup();
                let mut best = 0.0f64;
                for v in atoms {
                    // fiber endpoints: just below the atom, and all the way through it
                    let before = (da.cum_before(v) - db.cum_before(v)).abs();
                    let through =
                        (da.cdf(v, 0.0) + mass_at(da, v) - db.cdf(v, 0.0) - mass_at(db, v)).abs();
                    best = best.max(before).max(through);
                }
                Ok(best)
            }
            _ => Err(Error::UnsupportedModel(
                "exact distance implemented for lifted pairs only among non-piecewise models"
                    .to_string(),
            )),
        },
        _ => Err(Error::UnsupportedModel(
            "exact distance needs both models piecewise linear or both lifted discrete".to_string(),
        )),
    }
}

fn mass_at(ld: &LiftedDiscrete, v: f64) -> f64 {
    match ld.atoms.binary_search_by(|a| a.total_cmp(&v)) {
        Ok(i) => ld.weights[i],
        Err(_) => 0.0,
    }
}

/// Serializable model description: `{"kind": "...", "params": {...}}`.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(tag = "kind", content = "params", rename_all = "kebab-case")]
pub enum ModelSpec {
    UniformUnit,
    PiecewiseLinearCdf {
        points: Vec<(f64, f64)>,
    },
    DiscretePmfLifted {
        atoms: Vec<(f64, f64)>,
    },
    WedgePerturbed {
        #[serde(default = "default_base")]
        base: Box<ModelSpec>,
        eps: f64,
        center: f64,
    },
}

fn default_base() -> Box<ModelSpec> {
    Box::new(ModelSpec::UniformUnit)
}

impl ModelSpec {
    pub fn build(&self) -> Result<ReferenceModel> {
        match self {
            ModelSpec::UniformUnit => Ok(ReferenceModel::UniformUnit),
            ModelSpec::PiecewiseLinearCdf { points } => {
                ReferenceModel::piecewise_linear(points.clone())
            }
            ModelSpec::DiscretePmfLifted { atoms } => {
                ReferenceModel::lifted_discrete(atoms.clone())
            }
            ModelSpec::WedgePerturbed { base, eps, center } => {
                ReferenceModel::wedge_perturb(base.build()?, *eps, *center)
            }
        }
    }

    /// Parses either inline JSON, the name of a builtin, or a path to a JSON
    /// file.
    pub fn parse(arg: &str) -> Result<ModelSpec> {
        let trimmed = arg.trim();
        if trimmed == "uniform-unit" {
            return Ok(ModelSpec::UniformUnit);
        }
        if trimmed.starts_with('{') {
            return serde_json::from_str(trimmed)
                .map_err(|e| Error::config(format!("inline model spec: {e}")));
        }
        let text = std::fs::read_to_string(trimmed)
            .map_err(|e| Error::config(format!("model spec file {trimmed}: {e}")))?;
        serde_json::from_str(&text).map_err(|e| Error::config(format!("model spec {trimmed}: {e}")))
    }
}
