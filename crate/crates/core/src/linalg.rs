//! Dense complex matrix helpers on top of `nalgebra`.

use nalgebra::{DMatrix, SymmetricEigen};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use nalgebra::Complex;

pub type C64 = Complex<f64>;
pub type CMatrix = DMatrix<C64>;

pub fn c(re: f64) -> C64 {
    C64::new(re, 0.0)
}

pub fn identity(d: usize) -> CMatrix {
    CMatrix::identity(d, d)
}

pub fn zeros(d: usize) -> CMatrix {
    CMatrix::zeros(d, d)
}

pub fn real_diag(values: &[f64]) -> CMatrix {
    let d = values.len();
    let mut m = zeros(d);
    for (i, v) in values.iter().enumerate() {
        m[(i, i)] = c(*v);
    }
    m
}

pub fn from_real_rows(rows: &[Vec<f64>]) -> Result<CMatrix> {
    let d = rows.len();
    if rows.iter().any(|r| r.len() != d) {
        return Err(Error::invalid("matrix rows must form a square array"));
    }
    Ok(CMatrix::from_fn(d, d, |i, j| c(rows[i][j])))
}

/// Largest entry modulus.
pub fn max_abs(m: &CMatrix) -> f64 {
    m.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

/// Operator (spectral) norm.
pub fn op_norm(m: &CMatrix) -> f64 {
    if m.is_empty() {
        return 0.0;
    }
    m.clone().svd(false, false).singular_values.max()
}

/// Normalized trace `tr(m)/d`.
pub fn ntrace(m: &CMatrix) -> C64 {
    let d = m.nrows();
    m.trace() / (d as f64)
}

/// `u x u*`.
pub fn conjugate(u: &CMatrix, x: &CMatrix) -> CMatrix {
    u * x * u.adjoint()
}

/// `‖u* u − I‖_max`.
pub fn unitarity_defect(u: &CMatrix) -> f64 {
    let d = u.ncols();
    max_abs(&(u.adjoint() * u - identity(d)))
}

/// Eigen-decomposition of a Hermitian matrix, eigenvalues ascending.
pub fn hermitian_eigen(m: &CMatrix) -> (Vec<f64>, CMatrix) {
    let d = m.nrows();
    if d == 0 {
        return (Vec::new(), zeros(0));
    }
    let sym = (m + m.adjoint()) * c(0.5);
    let eig = SymmetricEigen::new(sym);
    let mut order: Vec<usize> = (0..d).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let values = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    let vectors = CMatrix::from_fn(d, d, |r, col| eig.eigenvectors[(r, order[col])]);
    (values, vectors)
}

/// Columns of `u` picked in the given order.
pub fn select_columns(u: &CMatrix, cols: &[usize]) -> CMatrix {
    CMatrix::from_fn(u.nrows(), cols.len(), |r, k| u[(r, cols[k])])
}

/// Permutation matrix with `P e_c = e_{image[c]}`.
pub fn permutation_matrix(image: &[usize]) -> CMatrix {
    let d = image.len();
    let mut p = zeros(d);
    for (col, &row) in image.iter().enumerate() {
        p[(row, col)] = c(1.0);
    }
    p
}

/// Row-major JSON form `{"d": d, "re": [[…]], "im": [[…]]}`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MatrixJson {
    pub d: usize,
    pub re: Vec<Vec<f64>>,
    #[serde(default)]
    pub im: Option<Vec<Vec<f64>>>,
}

impl MatrixJson {
    pub fn from_matrix(m: &CMatrix) -> Self {
        let d = m.nrows();
        let re = (0..d).map(|i| (0..d).map(|j| m[(i, j)].re).collect()).collect();
        let im = (0..d).map(|i| (0..d).map(|j| m[(i, j)].im).collect()).collect();
        Self { d, re, im: Some(im) }
    }

    pub fn to_matrix(&self) -> Result<CMatrix> {
        let d = self.d;
        let shape_ok = |rows: &Vec<Vec<f64>>| rows.len() == d && rows.iter().all(|r| r.len() == d);
        if !shape_ok(&self.re) || !self.im.as_ref().is_none_or(shape_ok) {
            return Err(Error::invalid(format!("matrix arrays must be {d}x{d}")));
        }
        Ok(CMatrix::from_fn(d, d, |i, j| {
            let im = self.im.as_ref().map_or(0.0, |m| m[i][j]);
            C64::new(self.re[i][j], im)
        }))
    }
}

/// Serde adapter so matrices can sit inside derived structs.
pub mod matrix_serde {
    use super::*;
    use serde::{Deserializer, Serializer};

    pub fn serialize<S: Serializer>(m: &CMatrix, s: S) -> std::result::Result<S::Ok, S::Error> {
        MatrixJson::from_matrix(m).serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<CMatrix, D::Error> {
        let raw = MatrixJson::deserialize(d)?;
        raw.to_matrix().map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn eigen_sorted_and_reconstructs() {
        let m = from_real_rows(&[vec![2.0, 1.0], vec![1.0, 2.0]]).unwrap();
        let (vals, vecs) = hermitian_eigen(&m);
        assert!((vals[0] - 1.0).abs() < 1e-12 && (vals[1] - 3.0).abs() < 1e-12);
        let back = &vecs * real_diag(&vals) * vecs.adjoint();
        assert!(max_abs(&(back - m)) < 1e-12);
    }

    #[test]
    fn op_norm_of_diag() {
        assert!((op_norm(&real_diag(&[1.0, -3.0, 2.0])) - 3.0).abs() < 1e-12);
    }

    #[test]
    fn permutation_matrix_moves_basis_vectors() {
        let p = permutation_matrix(&[1, 2, 0]);
        assert_eq!(p[(1, 0)], c(1.0));
        assert_eq!(p[(0, 2)], c(1.0));
        assert!(unitarity_defect(&p) < 1e-15);
    }

    #[test]
    fn matrix_json_rejects_bad_shape() {
        let j = MatrixJson { d: 2, re: vec![vec![1.0]], im: None };
        assert!(j.to_matrix().is_err());
    }
}
