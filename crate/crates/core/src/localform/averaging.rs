use serde::Serialize;

use super::scheme::PartitionScheme;
use crate::error::{Error, Result};
use crate::linalg::{self, CMatrix};
use crate::speclin::{HermitianMatrix, ProjectionPartition};

/// Right-continuous step function: `values[i]` on `[breaks[i], breaks[i+1])`,
/// the last value extending to `breaks[last]` inclusive.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct StepFunction {
    pub breaks: Vec<f64>,
    pub values: Vec<f64>,
}

impl StepFunction {
    pub fn eval(&self, x: f64) -> f64 {
        let i = self.breaks.partition_point(|b| *b <= x);
        self.values[i.saturating_sub(1).min(self.values.len() - 1)]
    }

    /// `sup |f − g|` over the covered range, probing both ends of every
    /// step, the `extra` points, and `samples` interior points per step.
    pub fn sup_error(&self, f: &dyn Fn(f64) -> f64, extra: &[f64], samples: usize) -> f64 {
        let mut worst: f64 = 0.0;
        for (i, v) in self.values.iter().enumerate() {
            let (a, b) = (self.breaks[i], self.breaks[i + 1]);
            for s in 0..=samples + 1 {
                let x = a + (b - a) * s as f64 / (samples + 1) as f64;
                worst = worst.max((f(x) - v).abs());
            }
            for &x in extra.iter().filter(|x| a <= **x && **x <= b) {
                worst = worst.max((f(x) - v).abs());
            }
        }
        worst
    }
}

/// `(1/k) Σ_t Σ_i β_i^t 1_{Q_i^t}` with `β_i^t = m ∫_{Q_i^t} f dμ`. With
/// `t_average` false only the first partition is used.
pub fn averaging_map(scheme: &PartitionScheme, f: &dyn Fn(f64) -> f64, t_average: bool) -> StepFunction {
    let parts = if t_average { &scheme.cells[..] } else { &scheme.cells[..1] };
    let m = scheme.m as f64;
    let mut breaks: Vec<f64> = Vec::new();
    let mut per_part: Vec<Vec<(f64, f64, f64)>> = Vec::with_capacity(parts.len());
    for p in parts {
        let mut steps = Vec::new();
        for c in p {
            let beta = m * scheme.measure.integrate_over(f, &c.set);
            for s in c.set.segments() {
                steps.push((s.left, s.right, beta));
                breaks.push(s.left);
                breaks.push(s.right);
            }
        }
        steps.sort_by(|a, b| a.0.total_cmp(&b.0));
        per_part.push(steps);
    }
    breaks.sort_by(f64::total_cmp);
    breaks.dedup_by(|a, b| (*a - *b).abs() <= 1e-14);
    let values = breaks
        .windows(2)
        .map(|w| {
            let mid = 0.5 * (w[0] + w[1]);
            let total: f64 = per_part
                .iter()
                .map(|steps| {
                    let i = steps.partition_point(|s| s.0 <= mid).saturating_sub(1);
                    let (l, r, v) = steps[i];
                    if l <= mid && mid <= r { v } else { 0.0 }
                })
                .sum();
            total / per_part.len() as f64
        })
        .collect();
    StepFunction { breaks, values }
}

/// `‖(1/k) Σ_t Σ_i m τ(b q_i^t) q_i^t‖ / ‖b‖` for uniform partitions; zero
/// for `b = 0`.
pub fn averaging_contraction_check(partitions: &[ProjectionPartition], b: &HermitianMatrix) -> Result<f64> {
    if partitions.is_empty() {
        return Err(Error::invalid("need at least one partition"));
    }
    let mut acc: CMatrix = linalg::zeros(b.dim());
    for p in partitions {
        if p.d() != b.dim() {
            return Err(Error::DimensionMismatch { expected: b.dim(), got: p.d() });
        }
        if !p.is_uniform() {
            return Err(Error::PartitionNotUniform);
        }
        acc += p.expectation(b.matrix());
    }
    let norm = b.op_norm();
    if norm == 0.0 {
        return Ok(0.0);
    }
    Ok(linalg::op_norm(&acc) / partitions.len() as f64 / norm)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::localform::build_partition_scheme;
    use crate::measures::PiecewiseUniformMeasure;
    use crate::random;
    use crate::tol;

    fn unit() -> PiecewiseUniformMeasure {
        PiecewiseUniformMeasure::uniform(0.0, 1.0).unwrap()
    }

    #[test]
    fn constant_is_reproduced() {
        let s = build_partition_scheme(&unit(), 3).unwrap();
        let g = averaging_map(&s, &|_| 2.5, true);
        assert!(g.values.iter().all(|v| (v - 2.5).abs() < 1e-12));
    }

    // At r = 2, m = 4: cells are quarters and the cell means of x are
    // 1/8, 3/8, 5/8, 7/8, so the sup error is 1/8.
    #[test]
    fn identity_function_cell_means() {
        let s = build_partition_scheme(&unit(), 2).unwrap();
        let g = averaging_map(&s, &|x| x, true);
        for (v, e) in g.values.iter().zip([0.125, 0.375, 0.625, 0.875]) {
            assert!((v - e).abs() < 1e-12);
        }
        let err = g.sup_error(&|x| x, &[], 4);
        assert!((err - 0.125).abs() < 1e-12 && err <= 0.5);
    }

    #[test]
    fn aligned_indicator_is_exact() {
        let s = build_partition_scheme(&unit(), 2).unwrap();
        let f = |x: f64| if x <= 0.5 { 1.0 } else { 0.0 };
        let g = averaging_map(&s, &f, false);
        assert!(g.values.iter().zip(&g.breaks).all(|(v, b)| (v - if *b < 0.5 { 1.0 } else { 0.0 }).abs() < 1e-12));
    }

    #[test]
    fn contraction_examples() {
        let mut rng = random::generator(3);
        let b = random::hermitian(8, &mut rng);
        let full = ProjectionPartition::trivial(8);
        let ratio = averaging_contraction_check(std::slice::from_ref(&full), &b).unwrap();
        assert!((ratio - b.trace().abs() / b.op_norm()).abs() < 1e-12);
        assert!((averaging_contraction_check(&[full], &HermitianMatrix::identity(8)).unwrap() - 1.0).abs() < 1e-12);
        let parts: Vec<ProjectionPartition> = (0..4)
            .map(|_| ProjectionPartition::coordinate(8, random::uniform_groups(8, 4, &mut rng)).unwrap())
            .collect();
        assert!(averaging_contraction_check(&parts, &b).unwrap() <= 1.0 + tol::FUNCTIONAL_CALCULUS);
        assert_eq!(averaging_contraction_check(&parts, &HermitianMatrix::zeros(8)).unwrap(), 0.0);
    }
}
