//! Linear maps on `d×d` matrices and the convex combinations of unitary
//! conjugations used as witnesses.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{self, CMatrix};
use crate::tol;

/// A linear map on `d×d` complex matrices, given by its action.
pub trait MatrixMap {
    fn dim(&self) -> usize;
    fn apply(&self, x: &CMatrix) -> CMatrix;
}

impl<M: MatrixMap + ?Sized> MatrixMap for &M {
    fn dim(&self) -> usize {
        (**self).dim()
    }

    fn apply(&self, x: &CMatrix) -> CMatrix {
        (**self).apply(x)
    }
}

impl<M: MatrixMap + ?Sized> MatrixMap for Box<M> {
    fn dim(&self) -> usize {
        (**self).dim()
    }

    fn apply(&self, x: &CMatrix) -> CMatrix {
        (**self).apply(x)
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct IdentityMap {
    pub d: usize,
}

impl MatrixMap for IdentityMap {
    fn dim(&self) -> usize {
        self.d
    }

    fn apply(&self, x: &CMatrix) -> CMatrix {
        x.clone()
    }
}

/// `x ↦ τ(x) I`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TraceMap {
    pub d: usize,
}

impl MatrixMap for TraceMap {
    fn dim(&self) -> usize {
        self.d
    }

    fn apply(&self, x: &CMatrix) -> CMatrix {
        linalg::identity(self.d) * linalg::ntrace(x)
    }
}

/// `Ad(u): x ↦ u x u*`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Conjugation {
    #[serde(with = "linalg::matrix_serde")]
    pub unitary: CMatrix,
}

impl Conjugation {
    pub fn new(unitary: CMatrix) -> Result<Self> {
        check_unitary(&unitary)?;
        Ok(Self { unitary })
    }
}

impl MatrixMap for Conjugation {
    fn dim(&self) -> usize {
        self.unitary.nrows()
    }

    fn apply(&self, x: &CMatrix) -> CMatrix {
        linalg::conjugate(&self.unitary, x)
    }
}

fn check_unitary(u: &CMatrix) -> Result<()> {
    if u.nrows() != u.ncols() {
        return Err(Error::invalid("unitary must be square"));
    }
    let defect = linalg::unitarity_defect(u);
    if defect > tol::UNITARY {
        return Err(Error::invalid(format!("matrix is not unitary (defect {defect:e})")));
    }
    Ok(())
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct UnitaryTerm {
    pub weight: f64,
    #[serde(with = "linalg::matrix_serde")]
    pub unitary: CMatrix,
}

/// `ρ = Σ λ_h Ad(u_h)` with `λ_h ≥ 0`, `Σ λ_h = 1`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawMixed")]
pub struct MixedUnitary {
    terms: Vec<UnitaryTerm>,
}

#[derive(Deserialize)]
struct RawMixed {
    terms: Vec<UnitaryTerm>,
}

impl TryFrom<RawMixed> for MixedUnitary {
    type Error = Error;

    fn try_from(raw: RawMixed) -> Result<Self> {
        MixedUnitary::new(raw.terms)
    }
}

impl MixedUnitary {
    pub fn new(terms: Vec<UnitaryTerm>) -> Result<Self> {
        let d = terms.first().ok_or_else(|| Error::invalid("mixed unitary needs a term"))?.unitary.nrows();
        for t in &terms {
            if t.unitary.nrows() != d {
                return Err(Error::DimensionMismatch { expected: d, got: t.unitary.nrows() });
            }
            if !(t.weight >= 0.0 && t.weight.is_finite()) {
                return Err(Error::invalid("weights must be nonnegative"));
            }
            check_unitary(&t.unitary)?;
        }
        let total: f64 = terms.iter().map(|t| t.weight).sum();
        if (total - 1.0).abs() > tol::DOUBLY_STOCHASTIC * terms.len().max(1) as f64 {
            return Err(Error::invalid(format!("weights sum to {total}, not 1")));
        }
        Ok(Self { terms })
    }

    /// Uniform mixture of the given unitaries.
    pub fn uniform(unitaries: Vec<CMatrix>) -> Result<Self> {
        let w = 1.0 / unitaries.len().max(1) as f64;
        Self::new(unitaries.into_iter().map(|unitary| UnitaryTerm { weight: w, unitary }).collect())
    }

    pub fn terms(&self) -> &[UnitaryTerm] {
        &self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// `self ∘ inner`, flattened into products of unitaries.
    pub fn compose(&self, inner: &MixedUnitary) -> MixedUnitary {
        let mut terms = Vec::with_capacity(self.len() * inner.len());
        for a in &self.terms {
            for b in &inner.terms {
                terms.push(UnitaryTerm { weight: a.weight * b.weight, unitary: &a.unitary * &b.unitary });
            }
        }
        MixedUnitary { terms }
    }

    /// Largest unitarity defect over the terms and the weight-sum defect.
    pub fn defects(&self) -> (f64, f64) {
        let u = self.terms.iter().map(|t| linalg::unitarity_defect(&t.unitary)).fold(0.0, f64::max);
        let w = (self.terms.iter().map(|t| t.weight).sum::<f64>() - 1.0).abs();
        (u, w)
    }
}

impl MatrixMap for MixedUnitary {
    fn dim(&self) -> usize {
        self.terms[0].unitary.nrows()
    }

    fn apply(&self, x: &CMatrix) -> CMatrix {
        let mut out = linalg::zeros(x.nrows());
        for t in &self.terms {
            out += linalg::conjugate(&t.unitary, x) * linalg::c(t.weight);
        }
        out
    }
}

/// Maps applied right to left: `factors[0] ∘ factors[1] ∘ …`.
pub struct Composition<'a> {
    pub factors: Vec<&'a dyn MatrixMap>,
}

impl MatrixMap for Composition<'_> {
    fn dim(&self) -> usize {
        self.factors[0].dim()
    }

    fn apply(&self, x: &CMatrix) -> CMatrix {
        self.factors.iter().rev().fold(x.clone(), |acc, f| f.apply(&acc))
    }
}

/// `max(‖T(I) − I‖, max_x |τ(T(x)) − τ(x)|)` over the probes.
pub fn doubly_stochastic_defect(t: &dyn MatrixMap, probes: &[CMatrix]) -> f64 {
    let d = t.dim();
    let unital = linalg::max_abs(&(t.apply(&linalg::identity(d)) - linalg::identity(d)));
    probes
        .iter()
        .map(|x| (linalg::ntrace(&t.apply(x)) - linalg::ntrace(x)).norm())
        .fold(unital, f64::max)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::random;

    #[test]
    fn basic_maps() {
        let x = linalg::real_diag(&[1.0, 3.0]);
        assert_eq!(IdentityMap { d: 2 }.apply(&x), x);
        assert_eq!(TraceMap { d: 2 }.apply(&x), linalg::identity(2) * linalg::c(2.0));
        let swap = Conjugation::new(linalg::permutation_matrix(&[1, 0])).unwrap();
        assert_eq!(swap.apply(&x), linalg::real_diag(&[3.0, 1.0]));
    }

    #[test]
    fn mixed_unitary_validation_and_json() {
        assert!(MixedUnitary::new(vec![UnitaryTerm { weight: 0.5, unitary: linalg::identity(2) }]).is_err());
        assert!(MixedUnitary::new(vec![UnitaryTerm { weight: 1.0, unitary: linalg::identity(2) * linalg::c(2.0) }]).is_err());
        let mut rng = random::generator(1);
        let m = MixedUnitary::uniform(vec![random::unitary(3, &mut rng), random::unitary(3, &mut rng)]).unwrap();
        let back: MixedUnitary = serde_json::from_str(&serde_json::to_string(&m).unwrap()).unwrap();
        assert!(linalg::max_abs(&(back.terms()[1].unitary.clone() - &m.terms()[1].unitary)) < 1e-15);
        let x = random::hermitian(3, &mut rng);
        assert!(doubly_stochastic_defect(&m, &[x.matrix().clone()]) < 1e-12);
    }

    #[test]
    fn compose_matches_composition() {
        let mut rng = random::generator(4);
        let a = MixedUnitary::uniform(vec![random::unitary(3, &mut rng), random::unitary(3, &mut rng)]).unwrap();
        let b = MixedUnitary::uniform(vec![random::unitary(3, &mut rng), random::unitary(3, &mut rng)]).unwrap();
        let x = random::hermitian(3, &mut rng).into_matrix();
        let flat = a.compose(&b).apply(&x);
        let nested = Composition { factors: vec![&a, &b] }.apply(&x);
        assert!(linalg::max_abs(&(flat - nested)) < 1e-12);
    }
}
