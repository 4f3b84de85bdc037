use rand::Rng;
use rand_distr::StandardNormal;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::measures::{equivalent, DiscreteMeasure};
use crate::random;
use crate::speclin::{joint_spectral_measure, CommutingFamily};
use crate::tol;

/// Complete test for `n = 1`: `μ ≺ ν` iff masses and means agree and
/// `∫|x − t| dμ ≤ ∫|x − t| dν` at every support point `t`.
pub fn potential_oracle_1d(mu: &DiscreteMeasure, nu: &DiscreteMeasure) -> Result<bool> {
    if mu.dim() != 1 || nu.dim() != 1 {
        return Err(Error::DimensionMismatch { expected: 1, got: mu.dim().max(nu.dim()) });
    }
    if !equivalent(mu, nu)? {
        return Ok(false);
    }
    let scale = mu.atoms().iter().chain(nu.atoms()).map(|a| a.point[0].abs()).fold(1.0, f64::max);
    for t in mu.atoms().iter().chain(nu.atoms()).map(|a| a.point[0]) {
        let f = |x: &[f64]| (x[0] - t).abs();
        if mu.integrate(f) > nu.integrate(f) + tol::LP * scale {
            return Ok(false);
        }
    }
    Ok(true)
}

/// `f(x) = max_j (⟨v_j, x⟩ + c_j)`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct MaxAffine {
    pub pieces: Vec<(Vec<f64>, f64)>,
}

impl MaxAffine {
    pub fn eval(&self, x: &[f64]) -> f64 {
        self.pieces
            .iter()
            .map(|(v, c)| v.iter().zip(x).map(|(a, b)| a * b).sum::<f64>() + c)
            .fold(f64::NEG_INFINITY, f64::max)
    }

    /// `|x_i − c|`.
    pub fn hinge(n: usize, i: usize, c: f64) -> Self {
        let mut e = vec![0.0; n];
        e[i] = 1.0;
        let neg: Vec<f64> = e.iter().map(|v| -v).collect();
        Self { pieces: vec![(e, -c), (neg, c)] }
    }

    /// Tangent planes of `|x|²` at the given points.
    pub fn squared_norm_tangents(points: &[Vec<f64>]) -> Self {
        Self {
            pieces: points
                .iter()
                .map(|p| (p.iter().map(|x| 2.0 * x).collect(), -p.iter().map(|x| x * x).sum::<f64>()))
                .collect(),
        }
    }
}

/// First violated function, if any, with both integrals.
#[derive(Clone, Debug, Serialize)]
pub struct BatteryOutcome {
    pub passed: bool,
    pub functions: usize,
    pub violation: Option<(usize, f64, f64)>,
}

/// Checks `μ(f) ≤ ν(f)` (within `ε_lp`) for each function.
pub fn battery_with_functions(mu: &DiscreteMeasure, nu: &DiscreteMeasure, fs: &[MaxAffine]) -> BatteryOutcome {
    for (i, f) in fs.iter().enumerate() {
        let (a, b) = (mu.integrate(|x| f.eval(x)), nu.integrate(|x| f.eval(x)));
        if a > b + tol::LP * (1.0 + b.abs()) {
            return BatteryOutcome { passed: false, functions: fs.len(), violation: Some((i, a, b)) };
        }
    }
    BatteryOutcome { passed: true, functions: fs.len(), violation: None }
}

fn unit_vector<R: Rng>(n: usize, rng: &mut R) -> Vec<f64> {
    loop {
        let v: Vec<f64> = (0..n).map(|_| rng.sample(StandardNormal)).collect();
        let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
        if norm > 1e-12 {
            return v.into_iter().map(|x| x / norm).collect();
        }
    }
}

/// The fixed functions plus `count` random max-affine functions.
fn battery(mu: &DiscreteMeasure, nu: &DiscreteMeasure, count: usize, seed: u64) -> Vec<MaxAffine> {
    let n = mu.dim();
    let mut rng = random::generator(seed);
    let center = nu.barycenter();
    let mut fs: Vec<MaxAffine> = (0..n).map(|i| MaxAffine::hinge(n, i, center[i])).collect();

    let support: Vec<Vec<f64>> = mu.atoms().iter().chain(nu.atoms()).map(|a| a.point.clone()).collect();
    let lo: Vec<f64> = (0..n).map(|i| support.iter().map(|p| p[i]).fold(f64::INFINITY, f64::min)).collect();
    let hi: Vec<f64> = (0..n).map(|i| support.iter().map(|p| p[i]).fold(f64::NEG_INFINITY, f64::max)).collect();
    let mut tangent_points: Vec<Vec<f64>> = support.iter().take(32).cloned().collect();
    while tangent_points.len() < 32 {
        tangent_points.push((0..n).map(|i| rng.random_range(lo[i]..=hi[i])).collect());
    }
    fs.push(MaxAffine::squared_norm_tangents(&tangent_points));

    for _ in 0..count {
        let pieces = rng.random_range(3..=8);
        let f = (0..pieces)
            .map(|_| {
                let v = unit_vector(n, &mut rng);
                let proj = support.iter().map(|p| p.iter().zip(&v).map(|(a, b)| a * b).sum::<f64>());
                let (pmin, pmax) = proj.fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), x| (a.min(x), b.max(x)));
                let c = if pmax > pmin { -rng.random_range(pmin..=pmax) } else { -pmin };
                (v, c)
            })
            .collect();
        fs.push(MaxAffine { pieces: f });
    }
    fs
}

/// Measure-level battery; refutation only.
pub fn convex_battery_measures(mu: &DiscreteMeasure, nu: &DiscreteMeasure, count: usize, seed: u64) -> Result<BatteryOutcome> {
    if mu.dim() != nu.dim() {
        return Err(Error::DimensionMismatch { expected: mu.dim(), got: nu.dim() });
    }
    Ok(battery_with_functions(mu, nu, &battery(mu, nu, count, seed)))
}

/// `τ(f(a)) ≤ τ(f(b))` for the fixed functions and `count` random
/// max-affine functions drawn from `seed`.
pub fn convex_battery_test(fam_a: &CommutingFamily, fam_b: &CommutingFamily, count: usize, seed: u64) -> Result<bool> {
    if fam_a.n() != fam_b.n() {
        return Err(Error::DimensionMismatch { expected: fam_a.n(), got: fam_b.n() });
    }
    let mu = joint_spectral_measure(fam_a, seed)?;
    let nu = joint_spectral_measure(fam_b, seed)?;
    Ok(convex_battery_measures(&mu, &nu, count, seed)?.passed)
}
