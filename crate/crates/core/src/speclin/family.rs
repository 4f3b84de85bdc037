use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{self, CMatrix, MatrixJson};
use crate::maps::MatrixMap;
use crate::tol;

/// Self-adjoint `d×d` matrix. The stored entries are exactly Hermitian; the
/// input is symmetrized after the tolerance check.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "MatrixJson", into = "MatrixJson")]
pub struct HermitianMatrix(CMatrix);

impl TryFrom<MatrixJson> for HermitianMatrix {
    type Error = Error;

    fn try_from(raw: MatrixJson) -> Result<Self> {
        HermitianMatrix::new(raw.to_matrix()?)
    }
}

impl From<HermitianMatrix> for MatrixJson {
    fn from(h: HermitianMatrix) -> Self {
        MatrixJson::from_matrix(&h.0)
    }
}

impl HermitianMatrix {
    pub fn new(m: CMatrix) -> Result<Self> {
        if m.nrows() != m.ncols() {
            return Err(Error::invalid(format!("matrix is {}x{}, not square", m.nrows(), m.ncols())));
        }
        if m.nrows() == 0 {
            return Err(Error::invalid("matrix dimension must be positive"));
        }
        if m.iter().any(|z| !(z.re.is_finite() && z.im.is_finite())) {
            return Err(Error::invalid("matrix entries must be finite"));
        }
        let asym = linalg::max_abs(&(&m - m.adjoint()));
        let bound = tol::HERMITIAN_REL * linalg::max_abs(&m);
        if asym > bound {
            return Err(Error::NotHermitian { asym, tol: bound });
        }
        let sym = (&m + m.adjoint()) * linalg::c(0.5);
        Ok(Self(sym))
    }

    pub fn from_real_diag(values: &[f64]) -> Result<Self> {
        Self::new(linalg::real_diag(values))
    }

    pub fn from_real_rows(rows: &[Vec<f64>]) -> Result<Self> {
        Self::new(linalg::from_real_rows(rows)?)
    }

    pub fn identity(d: usize) -> Self {
        Self(linalg::identity(d))
    }

    pub fn zeros(d: usize) -> Self {
        Self(linalg::zeros(d))
    }

    pub fn dim(&self) -> usize {
        self.0.nrows()
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.0
    }

    pub fn into_matrix(self) -> CMatrix {
        self.0
    }

    pub fn op_norm(&self) -> f64 {
        linalg::op_norm(&self.0)
    }

    /// Normalized trace.
    pub fn trace(&self) -> f64 {
        linalg::ntrace(&self.0).re
    }

    /// `u self u*`.
    pub fn conjugate(&self, u: &CMatrix) -> Self {
        let m = linalg::conjugate(u, &self.0);
        Self((&m + m.adjoint()) * linalg::c(0.5))
    }
}

/// Normalized trace `τ(A) = tr(A)/d`.
pub fn trace(a: &HermitianMatrix) -> f64 {
    a.trace()
}

/// `n` pairwise commuting Hermitian matrices of a common size.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawFamily", into = "RawFamily")]
pub struct CommutingFamily {
    members: Vec<HermitianMatrix>,
}

#[derive(Serialize, Deserialize)]
struct RawFamily {
    n: usize,
    members: Vec<HermitianMatrix>,
}

impl TryFrom<RawFamily> for CommutingFamily {
    type Error = Error;

    fn try_from(raw: RawFamily) -> Result<Self> {
        if raw.n != raw.members.len() {
            return Err(Error::DimensionMismatch { expected: raw.n, got: raw.members.len() });
        }
        CommutingFamily::new(raw.members)
    }
}

impl From<CommutingFamily> for RawFamily {
    fn from(f: CommutingFamily) -> Self {
        RawFamily { n: f.members.len(), members: f.members }
    }
}

impl CommutingFamily {
    pub fn new(members: Vec<HermitianMatrix>) -> Result<Self> {
        let d = members.first().ok_or_else(|| Error::invalid("family needs at least one member"))?.dim();
        if let Some(m) = members.iter().find(|m| m.dim() != d) {
            return Err(Error::DimensionMismatch { expected: d, got: m.dim() });
        }
        let scale = members.iter().map(|m| linalg::max_abs(m.matrix())).fold(1.0, f64::max);
        let bound = tol::COMMUTATOR_REL * scale;
        let mut norm: f64 = 0.0;
        for (i, a) in members.iter().enumerate() {
            for b in &members[i + 1..] {
                let (a, b) = (a.matrix(), b.matrix());
                norm = norm.max(linalg::max_abs(&(a * b - b * a)));
            }
        }
        if norm > bound {
            return Err(Error::NotAbelian { norm, tol: bound });
        }
        Ok(Self { members })
    }

    /// Family of real diagonal matrices, one per row of `diagonals`.
    pub fn from_diagonals(diagonals: &[Vec<f64>]) -> Result<Self> {
        Self::new(diagonals.iter().map(|v| HermitianMatrix::from_real_diag(v)).collect::<Result<_>>()?)
    }

    pub fn n(&self) -> usize {
        self.members.len()
    }

    pub fn d(&self) -> usize {
        self.members[0].dim()
    }

    pub fn members(&self) -> &[HermitianMatrix] {
        &self.members
    }

    pub fn member(&self, i: usize) -> &HermitianMatrix {
        &self.members[i]
    }

    /// Largest operator norm among the members.
    pub fn max_norm(&self) -> f64 {
        self.members.iter().map(HermitianMatrix::op_norm).fold(0.0, f64::max)
    }

    /// `(u a_i u*)_i`.
    pub fn conjugate(&self, u: &CMatrix) -> Self {
        Self { members: self.members.iter().map(|m| m.conjugate(u)).collect() }
    }

    /// `(T(a_i))_i` as plain matrices.
    pub fn map_with(&self, t: &dyn MatrixMap) -> Vec<CMatrix> {
        self.members.iter().map(|m| t.apply(m.matrix())).collect()
    }

    pub fn check_dim_cap(&self, cap: usize) -> Result<()> {
        if self.d() > cap {
            return Err(Error::OutOfRange(format!("dimension {} exceeds cap {cap}", self.d())));
        }
        Ok(())
    }
}
