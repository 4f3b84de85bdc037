use serde::Serialize;

use super::kernel::TransportKernel;
use crate::error::{Error, Result};
use crate::lp::{self, LpOutcome, LpProblem};
use crate::measures::{equivalent, DiscreteMeasure};
use crate::tol;

/// Verdict of [`decide_majorization`] with the canonical kernel when
/// feasible.
#[derive(Clone, Debug, Serialize)]
pub struct Decision {
    pub feasible: bool,
    pub witness: Option<TransportKernel>,
}

impl Decision {
    fn no() -> Self {
        Self { feasible: false, witness: None }
    }
}

/// Shifts by the barycenter of `mu` and rescales by the largest coordinate
/// spread of the two supports, floored at `10⁻³ max(1, max |x|)` so that
/// round-off between nearly equal supports is not blown up.
fn normalized_points(mu: &DiscreteMeasure, nu: &DiscreteMeasure) -> (Vec<Vec<f64>>, Vec<Vec<f64>>) {
    let center = mu.barycenter();
    let all = || mu.atoms().iter().chain(nu.atoms());
    let spread = (0..mu.dim())
        .map(|i| {
            let lo = all().map(|a| a.point[i]).fold(f64::INFINITY, f64::min);
            let hi = all().map(|a| a.point[i]).fold(f64::NEG_INFINITY, f64::max);
            hi - lo
        })
        .fold(0.0, f64::max);
    let magnitude = all().flat_map(|a| a.point.iter()).fold(1.0_f64, |m, x| m.max(x.abs()));
    let scale = spread.max(1e-3 * magnitude);
    let map = |m: &DiscreteMeasure| -> Vec<Vec<f64>> {
        m.atoms()
            .iter()
            .map(|a| a.point.iter().zip(&center).map(|(x, c)| (x - c) / scale).collect())
            .collect()
    };
    (map(mu), map(nu))
}

/// LP in the variables `K[s][t]` (index `s·|ν| + t`): row-stochastic rows,
/// mass balance for all but the last target atom, and barycenters.
fn build_lp(mu: &DiscreteMeasure, nu: &DiscreteMeasure) -> LpProblem {
    let (rows, cols) = (mu.len(), nu.len());
    let (xs, ys) = normalized_points(mu, nu);
    let (wm, wn) = (mu.total_mass(), nu.total_mass());
    let mut p = LpProblem::new(rows * cols);
    for s in 0..rows {
        let mut r = vec![0.0; rows * cols];
        r[s * cols..(s + 1) * cols].fill(1.0);
        p.push_row(r, 1.0);
    }
    for t in 0..cols.saturating_sub(1) {
        let mut r = vec![0.0; rows * cols];
        for (s, a) in mu.atoms().iter().enumerate() {
            r[s * cols + t] = a.mass / wm;
        }
        p.push_row(r, nu.atoms()[t].mass / wn);
    }
    for (s, x) in xs.iter().enumerate() {
        for (i, xi) in x.iter().enumerate() {
            let mut r = vec![0.0; rows * cols];
            for (t, y) in ys.iter().enumerate() {
                r[s * cols + t] = y[i];
            }
            p.push_row(r, *xi);
        }
    }
    p
}

/// Decides `mu ≺ nu` with the default LP tolerance.
pub fn decide_majorization(mu: &DiscreteMeasure, nu: &DiscreteMeasure) -> Result<Decision> {
    decide_majorization_with(mu, nu, tol::LP)
}

/// Decides `mu ≺ nu`: equal masses and first moments, then feasibility of
/// the kernel LP with phase-1 tolerance `tol_lp`.
pub fn decide_majorization_with(mu: &DiscreteMeasure, nu: &DiscreteMeasure, tol_lp: f64) -> Result<Decision> {
    if mu.dim() != nu.dim() {
        return Err(Error::DimensionMismatch { expected: mu.dim(), got: nu.dim() });
    }
    if !equivalent(mu, nu)? {
        return Ok(Decision::no());
    }
    let problem = build_lp(mu, nu);
    let x = match lp::find_feasible(&problem, tol_lp)? {
        LpOutcome::Solved(x) => x,
        _ => return Ok(Decision::no()),
    };
    let cols = nu.len();
    let k = x.chunks(cols).map(<[f64]>::to_vec).collect();
    let kernel = TransportKernel::new(mu.clone(), nu.clone(), k)?;
    Ok(Decision { feasible: true, witness: Some(kernel) })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn line(atoms: &[(f64, f64)]) -> DiscreteMeasure {
        DiscreteMeasure::on_line(atoms).unwrap()
    }

    fn assert_kernel(k: &TransportKernel, expect: &[&[f64]]) {
        for (r, e) in k.k.iter().zip(expect) {
            for (a, b) in r.iter().zip(*e) {
                assert!((a - b).abs() < 1e-12, "{:?}", k.k);
            }
        }
        assert!(k.is_valid(tol::LP));
    }

    #[test]
    fn examples() {
        let two = line(&[(0.0, 0.5), (2.0, 0.5)]);
        let d = decide_majorization(&two, &two).unwrap();
        assert!(d.feasible);
        assert_kernel(&d.witness.unwrap(), &[&[1.0, 0.0], &[0.0, 1.0]]);

        let d = decide_majorization(&line(&[(1.0, 1.0)]), &two).unwrap();
        assert_kernel(&d.witness.unwrap(), &[&[0.5, 0.5]]);

        // Oracle: rows (k, 1−k) with −2k + 2(1−k) = −1 give k = ¾.
        let d = decide_majorization(&line(&[(-1.0, 0.5), (1.0, 0.5)]), &line(&[(-2.0, 0.5), (2.0, 0.5)])).unwrap();
        assert_kernel(&d.witness.unwrap(), &[&[0.75, 0.25], &[0.25, 0.75]]);

        let d = decide_majorization(&line(&[(-2.0, 0.5), (2.0, 0.5)]), &line(&[(-1.0, 0.5), (1.0, 0.5)])).unwrap();
        assert!(!d.feasible && d.witness.is_none());
    }

    #[test]
    fn quick_rejects_and_errors() {
        assert!(!decide_majorization(&line(&[(0.0, 1.0)]), &line(&[(1.0, 1.0)])).unwrap().feasible);
        assert!(!decide_majorization(&line(&[(0.0, 1.0)]), &line(&[(0.0, 0.5)])).unwrap().feasible);
        let plane = DiscreteMeasure::dirac(vec![0.0, 0.0], 1.0).unwrap();
        assert!(decide_majorization(&plane, &line(&[(0.0, 1.0)])).is_err());
    }

    #[test]
    fn two_dimensional_square() {
        let corners = DiscreteMeasure::new(
            2,
            [(-1.0, -1.0), (-1.0, 1.0), (1.0, -1.0), (1.0, 1.0)]
                .iter()
                .map(|&(x, y)| crate::measures::Atom::new(vec![x, y], 0.25))
                .collect(),
        )
        .unwrap();
        let axis = |a: f64| {
            DiscreteMeasure::new(
                2,
                vec![
                    crate::measures::Atom::new(vec![0.0, a], 0.5),
                    crate::measures::Atom::new(vec![0.0, -a], 0.5),
                ],
            )
            .unwrap()
        };
        let ok = decide_majorization(&axis(1.0), &corners).unwrap();
        assert!(ok.feasible && ok.witness.unwrap().is_valid(tol::LP));
        assert!(!decide_majorization(&axis(1.01), &corners).unwrap().feasible);
    }
}
