use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::measures::DiscreteMeasure;
use crate::tol;

/// Row-stochastic, mass-balanced, barycenter-preserving matrix `K[s][t]`
/// with rows indexed by atoms of `mu` and columns by atoms of `nu`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawKernel")]
pub struct TransportKernel {
    pub mu: DiscreteMeasure,
    pub nu: DiscreteMeasure,
    #[serde(rename = "K")]
    pub k: Vec<Vec<f64>>,
}

#[derive(Deserialize)]
struct RawKernel {
    mu: DiscreteMeasure,
    nu: DiscreteMeasure,
    #[serde(rename = "K")]
    k: Vec<Vec<f64>>,
}

impl TryFrom<RawKernel> for TransportKernel {
    type Error = Error;

    fn try_from(raw: RawKernel) -> Result<Self> {
        TransportKernel::new(raw.mu, raw.nu, raw.k)
    }
}

/// Largest violation of each invariant group.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct KernelResiduals {
    pub row: f64,
    pub mass: f64,
    pub barycenter: f64,
}

impl KernelResiduals {
    pub fn max(&self) -> f64 {
        self.row.max(self.mass).max(self.barycenter)
    }
}

impl TransportKernel {
    /// Checks shape and nonnegativity; the three invariants are measured by
    /// [`Self::residuals`].
    pub fn new(mu: DiscreteMeasure, nu: DiscreteMeasure, k: Vec<Vec<f64>>) -> Result<Self> {
        if mu.dim() != nu.dim() {
            return Err(Error::DimensionMismatch { expected: mu.dim(), got: nu.dim() });
        }
        if k.len() != mu.len() {
            return Err(Error::DimensionMismatch { expected: mu.len(), got: k.len() });
        }
        if let Some(r) = k.iter().find(|r| r.len() != nu.len()) {
            return Err(Error::DimensionMismatch { expected: nu.len(), got: r.len() });
        }
        if k.iter().flatten().any(|v| !(v.is_finite() && *v >= -tol::LP)) {
            return Err(Error::invalid("kernel entries must be nonnegative"));
        }
        Ok(Self { mu, nu, k })
    }

    pub fn rows(&self) -> usize {
        self.k.len()
    }

    pub fn cols(&self) -> usize {
        self.nu.len()
    }

    pub fn residuals(&self) -> KernelResiduals {
        let (mu, nu) = (self.mu.atoms(), self.nu.atoms());
        let row = self.k.iter().map(|r| (r.iter().sum::<f64>() - 1.0).abs()).fold(0.0, f64::max);
        let mass = (0..nu.len())
            .map(|t| (mu.iter().zip(&self.k).map(|(a, r)| a.mass * r[t]).sum::<f64>() - nu[t].mass).abs())
            .fold(0.0, f64::max);
        let mut barycenter: f64 = 0.0;
        for (a, r) in mu.iter().zip(&self.k) {
            for (i, x) in a.point.iter().enumerate() {
                let y: f64 = r.iter().zip(nu).map(|(k, b)| k * b.point[i]).sum();
                barycenter = barycenter.max((y - x).abs());
            }
        }
        KernelResiduals { row, mass, barycenter }
    }

    /// Largest coordinate modulus over both supports.
    pub fn scale(&self) -> f64 {
        self.mu.atoms().iter().chain(self.nu.atoms()).flat_map(|a| a.point.iter()).fold(0.0, |m, x| m.max(x.abs()))
    }

    /// All three invariants within `eps`, the barycenter one relative to the
    /// point scale.
    pub fn is_valid(&self, eps: f64) -> bool {
        let r = self.residuals();
        r.row <= eps && r.mass <= eps && r.barycenter <= eps * (1.0 + self.scale())
    }

    /// Witness for `mu ≺ rho` from `self: mu ≺ nu` and `next: nu ≺ rho`.
    pub fn compose(&self, next: &TransportKernel) -> Result<TransportKernel> {
        if !self.nu.approx_eq(&next.mu, tol::POINT_MERGE, tol::MASS) {
            return Err(Error::MeasureMismatch("inner measures differ".into()));
        }
        let map = self.nu.atom_matching(&next.mu, tol::POINT_MERGE, tol::MASS).expect("checked above");
        let k = self
            .k
            .iter()
            .map(|r| {
                (0..next.cols())
                    .map(|u| r.iter().enumerate().map(|(t, v)| v * next.k[map[t]][u]).sum())
                    .collect()
            })
            .collect();
        TransportKernel::new(self.mu.clone(), next.nu.clone(), k)
    }
}
