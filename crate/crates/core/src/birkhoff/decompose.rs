use serde::{Deserialize, Serialize};

use super::matching::perfect_matching;
use super::matrix::{DoublyStochasticMatrix, Permutation};
use crate::error::{Error, Result};
use crate::tol;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BirkhoffTerm {
    pub eta: f64,
    pub sigma: Permutation,
}

/// `D = Σ η_σ P_σ`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BirkhoffDecomposition {
    pub terms: Vec<BirkhoffTerm>,
}

impl BirkhoffDecomposition {
    pub fn m(&self) -> usize {
        self.terms.first().map_or(0, |t| t.sigma.len())
    }

    pub fn reconstruct(&self) -> Vec<Vec<f64>> {
        let m = self.m();
        let mut out = vec![vec![0.0; m]; m];
        for t in &self.terms {
            for (i, &j) in t.sigma.images().iter().enumerate() {
                out[i][j] += t.eta;
            }
        }
        out
    }

    /// `max |D − Σ η_σ P_σ|`.
    pub fn residual(&self, d: &DoublyStochasticMatrix) -> f64 {
        let r = self.reconstruct();
        let mut worst: f64 = 0.0;
        for (row, orig) in r.iter().zip(d.entries()) {
            for (a, b) in row.iter().zip(orig) {
                worst = worst.max((a - b).abs());
            }
        }
        worst
    }

    pub fn total_weight(&self) -> f64 {
        self.terms.iter().map(|t| t.eta).sum()
    }
}

/// Greedy peeling: find a perfect matching on the support (entries above
/// `ε_ds`), subtract the smallest matched entry times the permutation, zero
/// what falls below `ε_ds`, repeat.
pub fn birkhoff_decompose(d: &DoublyStochasticMatrix) -> Result<BirkhoffDecomposition> {
    let m = d.m();
    let theta = tol::DOUBLY_STOCHASTIC;
    let mut rest: Vec<Vec<f64>> = d.entries().to_vec();
    let mut terms = Vec::new();
    for _ in 0..m * m + 1 {
        let remaining = rest.iter().map(|r| r.iter().sum::<f64>()).fold(0.0, f64::max);
        if remaining <= theta {
            break;
        }
        let adj: Vec<Vec<usize>> = rest.iter().map(|r| (0..m).filter(|&j| r[j] > theta).collect()).collect();
        let Some(sigma) = perfect_matching(&adj, m) else {
            return Err(Error::SubStochastic { residual: remaining });
        };
        let eta = sigma.iter().enumerate().map(|(i, &j)| rest[i][j]).fold(f64::INFINITY, f64::min);
        for (i, &j) in sigma.iter().enumerate() {
            rest[i][j] -= eta;
        }
        for v in rest.iter_mut().flatten() {
            if *v <= theta {
                *v = 0.0;
            }
        }
        terms.push(BirkhoffTerm { eta, sigma: Permutation::new(sigma)? });
    }
    Ok(BirkhoffDecomposition { terms })
}
