use serde::Serialize;

use super::diag::joint_diagonalize;
use super::family::CommutingFamily;
use crate::error::{Error, Result};
use crate::linalg::{self, CMatrix};
use crate::tol;

/// Outcome of [`approx_unitarily_equivalent`]. When the families are
/// equivalent, `witness` is a unitary `w` with `w* b_i w ≈ a_i` and
/// `residual = max_i ‖w* b_i w − a_i‖`.
#[derive(Clone, Debug, Serialize)]
pub struct EquivalenceVerdict {
    pub equivalent: bool,
    #[serde(serialize_with = "ser_opt_matrix")]
    pub witness: Option<CMatrix>,
    pub residual: Option<f64>,
}

fn ser_opt_matrix<S: serde::Serializer>(m: &Option<CMatrix>, s: S) -> std::result::Result<S::Ok, S::Error> {
    m.as_ref().map(linalg::MatrixJson::from_matrix).serialize(s)
}

/// Equal joint spectral measures, with the witness `w = U_B Π U_A*` built
/// from a multiplicity-matching permutation `Π` of eigen-columns.
pub fn approx_unitarily_equivalent(
    fam_a: &CommutingFamily,
    fam_b: &CommutingFamily,
    seed: u64,
) -> Result<EquivalenceVerdict> {
    if fam_a.n() != fam_b.n() {
        return Err(Error::DimensionMismatch { expected: fam_a.n(), got: fam_b.n() });
    }
    if fam_a.d() != fam_b.d() {
        return Err(Error::DimensionMismatch { expected: fam_a.d(), got: fam_b.d() });
    }
    let d = fam_a.d();
    let (ja, jb) = (joint_diagonalize(fam_a, seed)?, joint_diagonalize(fam_b, seed)?);
    let (ma, mb) = (ja.measure(), jb.measure());
    let no = EquivalenceVerdict { equivalent: false, witness: None, residual: None };
    let Some(atom_map) = ma.atom_matching(&mb, tol::POINT_MERGE, tol::MASS) else {
        return Ok(no);
    };

    let cols_a = ja.column_atoms(&ma, tol::POINT_MERGE)?;
    let cols_b = jb.column_atoms(&mb, tol::POINT_MERGE)?;
    let mut pool: Vec<Vec<usize>> = vec![Vec::new(); mb.len()];
    for (c, &t) in cols_b.iter().enumerate().rev() {
        pool[t].push(c);
    }
    let mut image = vec![0; d];
    for (c, &s) in cols_a.iter().enumerate() {
        image[c] = pool[atom_map[s]].pop().ok_or(Error::MeasureMismatch("multiplicities differ".into()))?;
    }
    let w = &jb.basis * linalg::permutation_matrix(&image) * ja.basis.adjoint();

    let residual = fam_a
        .members()
        .iter()
        .zip(fam_b.members())
        .map(|(a, b)| linalg::op_norm(&(w.adjoint() * b.matrix() * &w - a.matrix())))
        .fold(0.0, f64::max);
    if residual > tol::EQUIVALENCE {
        return Err(Error::PostCondition { what: "equivalence witness", residual, tol: tol::EQUIVALENCE });
    }
    Ok(EquivalenceVerdict { equivalent: true, witness: Some(w), residual: Some(residual) })
}
