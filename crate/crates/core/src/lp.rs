//! Dense two-phase simplex for `A x = b, x ≥ 0` with Bland's rule.

use crate::error::{Error, Result};

/// Equality-form problem `A x = b`, `x ≥ 0`, rows stored densely.
#[derive(Clone, Debug, PartialEq)]
pub struct LpProblem {
    pub a: Vec<Vec<f64>>,
    pub b: Vec<f64>,
    pub vars: usize,
}

impl LpProblem {
    pub fn new(vars: usize) -> Self {
        Self { a: Vec::new(), b: Vec::new(), vars }
    }

    pub fn push_row(&mut self, row: Vec<f64>, rhs: f64) {
        debug_assert_eq!(row.len(), self.vars);
        self.a.push(row);
        self.b.push(rhs);
    }

    /// `max_i |(A x − b)_i|`.
    pub fn residual(&self, x: &[f64]) -> f64 {
        self.a
            .iter()
            .zip(&self.b)
            .map(|(row, b)| (row.iter().zip(x).map(|(a, x)| a * x).sum::<f64>() - b).abs())
            .fold(0.0, f64::max)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum LpOutcome {
    /// A basic feasible (or optimal) point.
    Solved(Vec<f64>),
    /// Phase 1 stopped with this sum of artificial values.
    Infeasible(f64),
    Unbounded,
}

const PIVOT_TOL: f64 = 1e-10;
const MAX_PIVOTS: usize = 200_000;
const HARRIS: f64 = 1e-9;
/// Entries below this after a pivot are structural zeros lost to round-off.
const DROP_TOL: f64 = 1e-13;

struct Tableau {
    rows: Vec<Vec<f64>>,
    obj: Vec<f64>,
    basis: Vec<usize>,
    width: usize,
    vars: usize,
}

impl Tableau {
    fn rhs(&self, i: usize) -> f64 {
        self.rows[i][self.width]
    }

    fn pivot(&mut self, r: usize, c: usize) {
        let p = self.rows[r][c];
        for v in self.rows[r].iter_mut() {
            *v /= p;
        }
        let pivot_row = self.rows[r].clone();
        for (i, row) in self.rows.iter_mut().enumerate() {
            let f = row[c];
            if i != r && f != 0.0 {
                for (v, pv) in row.iter_mut().zip(&pivot_row) {
                    *v -= f * pv;
                    if v.abs() < DROP_TOL {
                        *v = 0.0;
                    }
                }
                row[c] = 0.0;
            }
        }
        let f = self.obj[c];
        if f != 0.0 {
            for (v, pv) in self.obj.iter_mut().zip(&pivot_row) {
                *v -= f * pv;
            }
            self.obj[c] = 0.0;
        }
        self.basis[r] = c;
    }

    /// Bland's rule for the entering column (smallest improving index).
    /// The leaving row comes from a two-pass Harris ratio test: among rows
    /// whose ratio is within `HARRIS` of the minimum, the largest pivot
    /// wins, ties going to the smallest basic index. `allowed` bounds the
    /// entering columns.
    fn run(&mut self, allowed: usize) -> Result<bool> {
        for _ in 0..MAX_PIVOTS {
            let Some(c) = (0..allowed).find(|&j| self.obj[j] < -PIVOT_TOL) else {
                return Ok(true);
            };
            let bound = (0..self.rows.len())
                .filter(|&i| self.rows[i][c] > PIVOT_TOL)
                .map(|i| (self.rhs(i).max(0.0) + HARRIS) / self.rows[i][c])
                .fold(f64::INFINITY, f64::min);
            if bound == f64::INFINITY {
                return Ok(false);
            }
            let mut best: Option<usize> = None;
            for i in 0..self.rows.len() {
                let a = self.rows[i][c];
                if a <= PIVOT_TOL || self.rhs(i).max(0.0) / a > bound {
                    continue;
                }
                best = match best {
                    Some(b) if self.rows[b][c] > a || self.rows[b][c] == a && self.basis[b] < self.basis[i] => Some(b),
                    _ => Some(i),
                };
            }
            self.pivot(best.expect("the minimizing row qualifies"), c);
        }
        Err(Error::Lp(format!("no convergence after {MAX_PIVOTS} pivots")))
    }

    fn point(&self) -> Vec<f64> {
        let mut x = vec![0.0; self.vars];
        for (i, &bv) in self.basis.iter().enumerate() {
            if bv < self.vars {
                x[bv] = self.rhs(i).max(0.0);
            }
        }
        x
    }
}

/// Phase 1. Returns the tableau with artificials driven out of the basis
/// (redundant rows removed), or the phase-1 objective if above `threshold`.
fn phase_one(p: &LpProblem, tol: f64) -> Result<std::result::Result<Tableau, f64>> {
    let (m, n) = (p.a.len(), p.vars);
    let width = n + m;
    let mut rows = Vec::with_capacity(m);
    for (i, (row, &b)) in p.a.iter().zip(&p.b).enumerate() {
        let s = if b < 0.0 { -1.0 } else { 1.0 };
        let mut r: Vec<f64> = row.iter().map(|v| s * v).collect();
        r.resize(width + 1, 0.0);
        r[n + i] = 1.0;
        r[width] = s * b;
        rows.push(r);
    }
    let mut obj = vec![0.0; width + 1];
    for r in &rows {
        for j in 0..n {
            obj[j] -= r[j];
        }
        obj[width] -= r[width];
    }
    let mut t = Tableau { rows, obj, basis: (n..n + m).collect(), width, vars: n };
    t.run(n)?;
    let infeasibility = -t.obj[width];
    let norm_b: f64 = p.b.iter().map(|v| v.abs()).sum();
    if infeasibility > tol * (1.0 + norm_b) {
        return Ok(Err(infeasibility));
    }
    let mut i = 0;
    while i < t.rows.len() {
        if t.basis[i] >= n {
            match (0..n).find(|&j| t.rows[i][j].abs() > PIVOT_TOL) {
                Some(j) => t.pivot(i, j),
                None => {
                    t.rows.remove(i);
                    t.basis.remove(i);
                    continue;
                }
            }
        }
        i += 1;
    }
    Ok(Ok(t))
}

/// Any basic feasible point, declared feasible when the phase-1 objective is
/// at most `tol · (1 + ‖b‖₁)`.
pub fn find_feasible(p: &LpProblem, tol: f64) -> Result<LpOutcome> {
    Ok(match phase_one(p, tol)? {
        Ok(t) => LpOutcome::Solved(t.point()),
        Err(v) => LpOutcome::Infeasible(v),
    })
}

/// Minimizes `cost · x` over the feasible set.
pub fn minimize(p: &LpProblem, cost: &[f64], tol: f64) -> Result<LpOutcome> {
    if cost.len() != p.vars {
        return Err(Error::DimensionMismatch { expected: p.vars, got: cost.len() });
    }
    let mut t = match phase_one(p, tol)? {
        Ok(t) => t,
        Err(v) => return Ok(LpOutcome::Infeasible(v)),
    };
    let width = t.width;
    let mut obj = vec![0.0; width + 1];
    obj[..p.vars].copy_from_slice(cost);
    for (i, &bv) in t.basis.iter().enumerate() {
        let cb = cost[bv];
        if cb != 0.0 {
            for (o, v) in obj.iter_mut().zip(&t.rows[i]) {
                *o -= cb * v;
            }
        }
    }
    t.obj = obj;
    Ok(if t.run(p.vars)? { LpOutcome::Solved(t.point()) } else { LpOutcome::Unbounded })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn feasible_simple() {
        let mut p = LpProblem::new(3);
        p.push_row(vec![1.0, 1.0, 1.0], 1.0);
        p.push_row(vec![1.0, -1.0, 0.0], 0.25);
        let LpOutcome::Solved(x) = find_feasible(&p, 1e-9).unwrap() else { panic!() };
        assert!(p.residual(&x) < 1e-12 && x.iter().all(|v| *v >= 0.0));
    }

    #[test]
    fn infeasible_detected() {
        let mut p = LpProblem::new(2);
        p.push_row(vec![1.0, 1.0], 1.0);
        p.push_row(vec![1.0, 1.0], 2.0);
        assert!(matches!(find_feasible(&p, 1e-9).unwrap(), LpOutcome::Infeasible(v) if v > 0.5));
    }

    #[test]
    fn redundant_rows_are_dropped() {
        let mut p = LpProblem::new(2);
        p.push_row(vec![1.0, 1.0], 1.0);
        p.push_row(vec![2.0, 2.0], 2.0);
        p.push_row(vec![1.0, -1.0], 0.0);
        let LpOutcome::Solved(x) = find_feasible(&p, 1e-9).unwrap() else { panic!() };
        assert!((x[0] - 0.5).abs() < 1e-12 && (x[1] - 0.5).abs() < 1e-12);
    }

    #[test]
    fn minimize_small() {
        // min −x − 2y with x + y + s = 4, x + 3y + t = 6 → (3, 1).
        let mut p = LpProblem::new(4);
        p.push_row(vec![1.0, 1.0, 1.0, 0.0], 4.0);
        p.push_row(vec![1.0, 3.0, 0.0, 1.0], 6.0);
        let LpOutcome::Solved(x) = minimize(&p, &[-1.0, -2.0, 0.0, 0.0], 1e-9).unwrap() else { panic!() };
        assert!((x[0] - 3.0).abs() < 1e-12 && (x[1] - 1.0).abs() < 1e-12);
        let mut q = LpProblem::new(2);
        q.push_row(vec![1.0, -1.0], 0.0);
        assert_eq!(minimize(&q, &[-1.0, 0.0], 1e-9).unwrap(), LpOutcome::Unbounded);
    }
}
