use std::cmp::Ordering;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::tol;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Atom {
    pub point: Vec<f64>,
    pub mass: f64,
}

impl Atom {
    pub fn new(point: Vec<f64>, mass: f64) -> Self {
        Self { point, mass }
    }
}

/// Finitely supported positive measure on `R^dim`.
///
/// Atoms are kept sorted lexicographically by point, and atoms closer than
/// [`tol::POINT_MERGE`] in sup-norm are merged into the lexicographically
/// first one.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawMeasure")]
pub struct DiscreteMeasure {
    dim: usize,
    atoms: Vec<Atom>,
}

#[derive(Deserialize)]
struct RawMeasure {
    dim: usize,
    atoms: Vec<Atom>,
}

impl TryFrom<RawMeasure> for DiscreteMeasure {
    type Error = Error;

    fn try_from(raw: RawMeasure) -> Result<Self> {
        DiscreteMeasure::new(raw.dim, raw.atoms)
    }
}

pub(crate) fn lex_cmp(a: &[f64], b: &[f64]) -> Ordering {
    for (x, y) in a.iter().zip(b) {
        match x.total_cmp(y) {
            Ordering::Equal => continue,
            o => return o,
        }
    }
    a.len().cmp(&b.len())
}

pub(crate) fn sup_dist(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max)
}

impl DiscreteMeasure {
    pub fn new(dim: usize, atoms: Vec<Atom>) -> Result<Self> {
        if dim == 0 {
            return Err(Error::invalid("measure dimension must be positive"));
        }
        if atoms.is_empty() {
            return Err(Error::invalid("measure needs at least one atom"));
        }
        for a in &atoms {
            if a.point.len() != dim {
                return Err(Error::DimensionMismatch { expected: dim, got: a.point.len() });
            }
            if a.point.iter().any(|x| !x.is_finite()) {
                return Err(Error::invalid("atom points must be finite"));
            }
            if !(a.mass.is_finite() && a.mass > 0.0) {
                return Err(Error::invalid(format!("atom mass must be positive, got {}", a.mass)));
            }
        }
        Ok(Self { dim, atoms: merge(atoms) })
    }

    pub fn dirac(point: Vec<f64>, mass: f64) -> Result<Self> {
        Self::new(point.len(), vec![Atom::new(point, mass)])
    }

    /// Shorthand for one-dimensional measures given as `(x, mass)` pairs.
    pub fn on_line(atoms: &[(f64, f64)]) -> Result<Self> {
        Self::new(1, atoms.iter().map(|&(x, w)| Atom::new(vec![x], w)).collect())
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn atoms(&self) -> &[Atom] {
        &self.atoms
    }

    pub fn len(&self) -> usize {
        self.atoms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.atoms.is_empty()
    }

    pub fn total_mass(&self) -> f64 {
        self.atoms.iter().map(|a| a.mass).sum()
    }

    pub fn first_moments(&self) -> Vec<f64> {
        let mut m = vec![0.0; self.dim];
        for a in &self.atoms {
            for (mj, x) in m.iter_mut().zip(&a.point) {
                *mj += a.mass * x;
            }
        }
        m
    }

    /// `(Σ mass, Σ mass·point)`.
    pub fn moments(&self) -> (f64, Vec<f64>) {
        (self.total_mass(), self.first_moments())
    }

    pub fn barycenter(&self) -> Vec<f64> {
        let w = self.total_mass();
        self.first_moments().into_iter().map(|m| m / w).collect()
    }

    pub fn integrate(&self, f: impl Fn(&[f64]) -> f64) -> f64 {
        self.atoms.iter().map(|a| a.mass * f(&a.point)).sum()
    }

    /// Index of the atom within `tol` (sup-norm) of `point`, if any.
    pub fn locate(&self, point: &[f64], tol: f64) -> Option<usize> {
        self.atoms
            .iter()
            .enumerate()
            .map(|(i, a)| (i, sup_dist(&a.point, point)))
            .filter(|&(_, dist)| dist <= tol)
            .min_by(|a, b| a.1.total_cmp(&b.1))
            .map(|(i, _)| i)
    }

    /// Same support (matched within `tol_pt`) and masses within `tol_mass`.
    pub fn approx_eq(&self, other: &Self, tol_pt: f64, tol_mass: f64) -> bool {
        self.atom_matching(other, tol_pt, tol_mass).is_some()
    }

    /// For each atom of `self`, the index of the atom of `other` it matches,
    /// when the two supports agree within `tol_pt` and masses within
    /// `tol_mass`.
    pub fn atom_matching(&self, other: &Self, tol_pt: f64, tol_mass: f64) -> Option<Vec<usize>> {
        if self.dim != other.dim || self.len() != other.len() {
            return None;
        }
        let mut used = vec![false; other.len()];
        let mut map = Vec::with_capacity(self.len());
        for a in &self.atoms {
            let j = other
                .atoms
                .iter()
                .enumerate()
                .filter(|(j, b)| !used[*j] && (a.mass - b.mass).abs() <= tol_mass)
                .map(|(j, b)| (j, sup_dist(&a.point, &b.point)))
                .filter(|&(_, dist)| dist <= tol_pt)
                .min_by(|x, y| x.1.total_cmp(&y.1))?
                .0;
            used[j] = true;
            map.push(j);
        }
        Some(map)
    }

    pub fn scaled(&self, factor: f64) -> Result<Self> {
        Self::new(
            self.dim,
            self.atoms.iter().map(|a| Atom::new(a.point.clone(), a.mass * factor)).collect(),
        )
    }

    /// Atomwise sum of two measures on the same space.
    pub fn sum(&self, other: &Self) -> Result<Self> {
        if self.dim != other.dim {
            return Err(Error::DimensionMismatch { expected: self.dim, got: other.dim });
        }
        let mut atoms = self.atoms.clone();
        atoms.extend(other.atoms.iter().cloned());
        Self::new(self.dim, atoms)
    }

    /// Sub-measure on the given atom indices.
    pub fn restrict(&self, indices: &[usize]) -> Result<Self> {
        Self::new(self.dim, indices.iter().map(|&i| self.atoms[i].clone()).collect())
    }

    /// Re-run canonical merging; a no-op on any constructed measure.
    pub fn merged(&self) -> Self {
        Self { dim: self.dim, atoms: merge(self.atoms.clone()) }
    }
}

fn merge(mut atoms: Vec<Atom>) -> Vec<Atom> {
    atoms.sort_by(|a, b| lex_cmp(&a.point, &b.point));
    let mut out: Vec<Atom> = Vec::with_capacity(atoms.len());
    for a in atoms {
        match out.iter_mut().find(|r| sup_dist(&r.point, &a.point) <= tol::POINT_MERGE) {
            Some(rep) => rep.mass += a.mass,
            None => out.push(a),
        }
    }
    out
}

/// Equal total mass and first moments (the relation `ν ∼ μ`).
pub fn equivalent(m1: &DiscreteMeasure, m2: &DiscreteMeasure) -> Result<bool> {
    if m1.dim != m2.dim {
        return Err(Error::DimensionMismatch { expected: m1.dim, got: m2.dim });
    }
    let (w1, f1) = m1.moments();
    let (w2, f2) = m2.moments();
    if (w1 - w2).abs() > tol::MASS {
        return Ok(false);
    }
    Ok(f1.iter().zip(&f2).all(|(a, b)| (a - b).abs() <= tol::moment_tol(*a, *b)))
}
