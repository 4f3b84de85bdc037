use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::tol;

/// Square nonnegative matrix with unit row and column sums (within `ε_ds`).
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawDs")]
pub struct DoublyStochasticMatrix {
    m: usize,
    entries: Vec<Vec<f64>>,
}

#[derive(Deserialize)]
struct RawDs {
    m: usize,
    entries: Vec<Vec<f64>>,
}

impl TryFrom<RawDs> for DoublyStochasticMatrix {
    type Error = Error;

    fn try_from(raw: RawDs) -> Result<Self> {
        if raw.entries.len() != raw.m {
            return Err(Error::DimensionMismatch { expected: raw.m, got: raw.entries.len() });
        }
        DoublyStochasticMatrix::new(raw.entries)
    }
}

impl DoublyStochasticMatrix {
    /// Entries in `[−ε_ds, 0)` are clamped to zero.
    pub fn new(entries: Vec<Vec<f64>>) -> Result<Self> {
        let m = entries.len();
        if m == 0 {
            return Err(Error::NotDoublyStochastic("empty matrix".into()));
        }
        if let Some(r) = entries.iter().find(|r| r.len() != m) {
            return Err(Error::DimensionMismatch { expected: m, got: r.len() });
        }
        let eps = tol::DOUBLY_STOCHASTIC;
        if entries.iter().flatten().any(|v| !v.is_finite() || *v < -eps) {
            return Err(Error::NotDoublyStochastic("entries must be nonnegative".into()));
        }
        let entries: Vec<Vec<f64>> = entries.into_iter().map(|r| r.into_iter().map(|v| v.max(0.0)).collect()).collect();
        for i in 0..m {
            let row: f64 = entries[i].iter().sum();
            let col: f64 = entries.iter().map(|r| r[i]).sum();
            if (row - 1.0).abs() > eps || (col - 1.0).abs() > eps {
                return Err(Error::NotDoublyStochastic(format!("line {i} sums to {row} / {col}")));
            }
        }
        Ok(Self { m, entries })
    }

    pub fn identity(m: usize) -> Self {
        Permutation::identity(m).to_matrix()
    }

    /// All entries `1/m`.
    pub fn uniform(m: usize) -> Self {
        Self { m, entries: vec![vec![1.0 / m as f64; m]; m] }
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn entries(&self) -> &[Vec<f64>] {
        &self.entries
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.entries[i][j]
    }

    /// `D β`.
    pub fn apply(&self, beta: &[f64]) -> Vec<f64> {
        self.entries.iter().map(|r| r.iter().zip(beta).map(|(a, b)| a * b).sum()).collect()
    }
}

/// Permutation `σ` of `0..m` stored as images; `P_σ` has `(P_σ)_{i,σ(i)} = 1`.
/// Serialized 1-indexed.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "Vec<usize>", into = "Vec<usize>")]
pub struct Permutation(Vec<usize>);

impl TryFrom<Vec<usize>> for Permutation {
    type Error = Error;

    fn try_from(one_based: Vec<usize>) -> Result<Self> {
        if one_based.contains(&0) {
            return Err(Error::invalid("permutation images are 1-indexed"));
        }
        Permutation::new(one_based.into_iter().map(|i| i - 1).collect())
    }
}

impl From<Permutation> for Vec<usize> {
    fn from(p: Permutation) -> Self {
        p.0.into_iter().map(|i| i + 1).collect()
    }
}

impl Permutation {
    pub fn new(images: Vec<usize>) -> Result<Self> {
        let m = images.len();
        let mut seen = vec![false; m];
        for &i in &images {
            if i >= m || std::mem::replace(&mut seen[i], true) {
                return Err(Error::invalid(format!("{images:?} is not a permutation")));
            }
        }
        Ok(Self(images))
    }

    pub fn identity(m: usize) -> Self {
        Self((0..m).collect())
    }

    pub fn images(&self) -> &[usize] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn image(&self, i: usize) -> usize {
        self.0[i]
    }

    pub fn to_matrix(&self) -> DoublyStochasticMatrix {
        let m = self.len();
        let mut entries = vec![vec![0.0; m]; m];
        for (i, &j) in self.0.iter().enumerate() {
            entries[i][j] = 1.0;
        }
        DoublyStochasticMatrix { m, entries }
    }
}
