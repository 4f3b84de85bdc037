use serde::Serialize;

use super::decompose::{birkhoff_decompose, BirkhoffDecomposition};
use super::matrix::{DoublyStochasticMatrix, Permutation};
use crate::error::{Error, Result};
use crate::linalg::{self, CMatrix};
use crate::maps::{MatrixMap, MixedUnitary, UnitaryTerm};
use crate::speclin::ProjectionPartition;
use crate::tol;

fn check_uniform(p: &ProjectionPartition, q: &ProjectionPartition) -> Result<()> {
    if p.d() != q.d() {
        return Err(Error::DimensionMismatch { expected: p.d(), got: q.d() });
    }
    if p.len() != q.len() || !p.is_uniform() || !q.is_uniform() {
        return Err(Error::PartitionNotUniform);
    }
    Ok(())
}

/// `γ_ij = m τ(T(q_j) p_i)` for uniform partitions of equal size. `T` is
/// spot-checked for unitality and trace preservation on the `q_j`.
pub fn coupling_matrix(t: &dyn MatrixMap, p: &ProjectionPartition, q: &ProjectionPartition) -> Result<DoublyStochasticMatrix> {
    check_uniform(p, q)?;
    if t.dim() != p.d() {
        return Err(Error::DimensionMismatch { expected: p.d(), got: t.dim() });
    }
    let m = p.len();
    let eps = tol::FUNCTIONAL_CALCULUS;
    let images: Vec<CMatrix> = q.blocks().iter().map(|b| t.apply(b)).collect();
    let mut sum = linalg::zeros(p.d());
    for (img, tr) in images.iter().zip(q.traces()) {
        if (linalg::ntrace(img).re - tr).abs() > eps {
            return Err(Error::NotDoublyStochasticMap("trace of T(q_j) differs from τ(q_j)".into()));
        }
        sum += img;
    }
    if linalg::max_abs(&(sum - linalg::identity(p.d()))) > eps {
        return Err(Error::NotDoublyStochasticMap("Σ T(q_j) differs from I".into()));
    }
    let gamma = (0..m)
        .map(|i| images.iter().map(|img| m as f64 * linalg::ntrace(&(img * &p.blocks()[i])).re).collect())
        .collect();
    DoublyStochasticMatrix::new(gamma)
}

/// `α_i = Σ_σ η_σ β_{σ(i)}`.
pub fn alpha_by_mixing(dec: &BirkhoffDecomposition, beta: &[f64]) -> Vec<f64> {
    let mut alpha = vec![0.0; beta.len()];
    for t in &dec.terms {
        for (i, a) in alpha.iter_mut().enumerate() {
            *a += t.eta * beta[t.sigma.image(i)];
        }
    }
    alpha
}

#[derive(Clone, Debug, Serialize)]
pub struct LocalFormTerm {
    pub eta: f64,
    pub sigma: Permutation,
    #[serde(with = "linalg::matrix_serde")]
    pub unitary: CMatrix,
}

/// Witness of `Σ α_i p_i = ρ(Σ β_i q_i)` with `ρ = Σ η_σ Ad(u_σ)`.
#[derive(Clone, Debug, Serialize)]
pub struct LocalForm {
    pub alpha: Vec<f64>,
    pub terms: Vec<LocalFormTerm>,
    #[serde(with = "linalg::matrix_serde")]
    pub lhs: CMatrix,
    #[serde(with = "linalg::matrix_serde")]
    pub rhs: CMatrix,
    pub residual: f64,
}

impl LocalForm {
    pub fn channel(&self) -> Result<MixedUnitary> {
        MixedUnitary::new(
            self.terms.iter().map(|t| UnitaryTerm { weight: t.eta, unitary: t.unitary.clone() }).collect(),
        )
    }
}

/// `u_σ = Σ_i v_{i,σ}` where `v_{i,σ}` carries the ordered adapted basis of
/// `ran q_{σ(i)}` onto that of `ran p_i`.
pub fn permutation_unitary(sigma: &Permutation, p: &ProjectionPartition, q: &ProjectionPartition) -> Result<CMatrix> {
    let mut u = linalg::zeros(p.d());
    for i in 0..p.len() {
        let (vp, vq) = (p.range(i), q.range(sigma.image(i)));
        if vp.ncols() != vq.ncols() {
            return Err(Error::RankMismatch { left: vp.ncols(), right: vq.ncols() });
        }
        u += vp * vq.adjoint();
    }
    Ok(u)
}

/// Builds `ρ` from the Birkhoff decomposition of `D` and checks the
/// identity `Σ (Dβ)_i p_i = ρ(Σ β_j q_j)` to `ε_local (1 + max|β|)`.
pub fn local_form_from_coupling(
    d: &DoublyStochasticMatrix,
    p: &ProjectionPartition,
    q: &ProjectionPartition,
    beta: &[f64],
) -> Result<LocalForm> {
    check_uniform(p, q)?;
    let m = d.m();
    if p.len() != m {
        return Err(Error::DimensionMismatch { expected: m, got: p.len() });
    }
    if beta.len() != m {
        return Err(Error::DimensionMismatch { expected: m, got: beta.len() });
    }
    let alpha = d.apply(beta);
    let dec = birkhoff_decompose(d)?;
    let terms = dec
        .terms
        .iter()
        .map(|t| {
            Ok(LocalFormTerm { eta: t.eta, sigma: t.sigma.clone(), unitary: permutation_unitary(&t.sigma, p, q)? })
        })
        .collect::<Result<Vec<_>>>()?;

    let mut lhs = linalg::zeros(p.d());
    for (a, b) in alpha.iter().zip(p.blocks()) {
        lhs += b * linalg::c(*a);
    }
    let mut x = linalg::zeros(q.d());
    for (bt, b) in beta.iter().zip(q.blocks()) {
        x += b * linalg::c(*bt);
    }
    let mut rhs = linalg::zeros(p.d());
    for t in &terms {
        rhs += linalg::conjugate(&t.unitary, &x) * linalg::c(t.eta);
    }
    let residual = linalg::op_norm(&(&lhs - &rhs));
    let bound = tol::LOCAL_FORM * (1.0 + beta.iter().fold(0.0_f64, |m, b| m.max(b.abs())));
    if residual > bound {
        return Err(Error::PostCondition { what: "local form identity", residual, tol: bound });
    }
    Ok(LocalForm { alpha, terms, lhs, rhs, residual })
}
