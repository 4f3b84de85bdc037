use serde::{Deserialize, Serialize};

use super::family::{CommutingFamily, HermitianMatrix};
use crate::error::{Error, Result};
use crate::linalg::{self, CMatrix, MatrixJson};
use crate::maps::MatrixMap;
use crate::tol;

/// Orthogonal projections `p_1, …, p_m` summing to the identity.
///
/// Every partition keeps an adapted orthonormal basis: `p_j` is the sum of
/// the rank-one projections onto the basis columns listed in `groups[j]`.
#[derive(Clone, Debug, PartialEq)]
pub struct ProjectionPartition {
    blocks: Vec<CMatrix>,
    traces: Vec<f64>,
    basis: CMatrix,
    groups: Vec<Vec<usize>>,
}

/// JSON forms: coordinate groups (0-indexed) or explicit block matrices.
#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum RawPartition {
    Groups { d: usize, groups: Vec<Vec<usize>> },
    Blocks { d: usize, blocks: Vec<MatrixJson> },
}

impl<'de> Deserialize<'de> for ProjectionPartition {
    fn deserialize<D: serde::Deserializer<'de>>(de: D) -> std::result::Result<Self, D::Error> {
        let built = match RawPartition::deserialize(de)? {
            RawPartition::Groups { d, groups } => ProjectionPartition::coordinate(d, groups),
            RawPartition::Blocks { d, blocks } => blocks
                .iter()
                .map(MatrixJson::to_matrix)
                .collect::<Result<Vec<_>>>()
                .and_then(|b| {
                    if b.iter().any(|m| m.nrows() != d) {
                        return Err(Error::invalid("block size differs from d"));
                    }
                    ProjectionPartition::new(b)
                }),
        };
        built.map_err(serde::de::Error::custom)
    }
}

impl Serialize for ProjectionPartition {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        RawPartition::Blocks { d: self.d(), blocks: self.blocks.iter().map(MatrixJson::from_matrix).collect() }
            .serialize(s)
    }
}

impl ProjectionPartition {
    /// Validates `p_i² = p_i = p_i*`, `p_i p_j = 0` and `Σ p_i = I` within
    /// `ε_proj`, and that no block is zero.
    pub fn new(blocks: Vec<CMatrix>) -> Result<Self> {
        let d = blocks.first().ok_or_else(|| Error::NotPartition("no blocks".into()))?.nrows();
        let eps = tol::PROJECTION;
        let mut sum = linalg::zeros(d);
        for (i, p) in blocks.iter().enumerate() {
            if p.nrows() != d || p.ncols() != d {
                return Err(Error::DimensionMismatch { expected: d, got: p.nrows() });
            }
            if linalg::max_abs(&(p - p.adjoint())) > eps || linalg::max_abs(&(p * p - p)) > eps {
                return Err(Error::NotPartition(format!("block {i} is not an orthogonal projection")));
            }
            for (j, q) in blocks.iter().enumerate().skip(i + 1) {
                if linalg::max_abs(&(p * q)) > eps {
                    return Err(Error::NotPartition(format!("blocks {i} and {j} are not orthogonal")));
                }
            }
            sum += p;
        }
        if linalg::max_abs(&(sum - linalg::identity(d))) > eps {
            return Err(Error::NotPartition("blocks do not sum to the identity".into()));
        }
        let mut basis = linalg::zeros(d);
        let mut groups = Vec::with_capacity(blocks.len());
        let mut col = 0;
        for (i, p) in blocks.iter().enumerate() {
            let (vals, vecs) = linalg::hermitian_eigen(p);
            let range: Vec<usize> = (0..d).filter(|&c| vals[c] > 0.5).collect();
            if range.is_empty() {
                return Err(Error::NotPartition(format!("block {i} is zero")));
            }
            if col + range.len() > d {
                return Err(Error::NotPartition("block ranks exceed the dimension".into()));
            }
            basis.columns_mut(col, range.len()).copy_from(&linalg::select_columns(&vecs, &range));
            groups.push((col..col + range.len()).collect());
            col += range.len();
        }
        let traces = blocks.iter().map(|p| linalg::ntrace(p).re).collect();
        Ok(Self { blocks, traces, basis, groups })
    }

    /// Blocks spanned by the basis columns in each group.
    pub fn from_basis(basis: &CMatrix, groups: Vec<Vec<usize>>) -> Result<Self> {
        let d = basis.nrows();
        if basis.ncols() != d || linalg::unitarity_defect(basis) > tol::UNITARY {
            return Err(Error::invalid("partition basis must be a square unitary"));
        }
        let mut seen = vec![false; d];
        for g in &groups {
            if g.is_empty() {
                return Err(Error::NotPartition("empty group".into()));
            }
            for &c in g {
                if c >= d || std::mem::replace(&mut seen[c], true) {
                    return Err(Error::NotPartition(format!("index {c} is out of range or repeated")));
                }
            }
        }
        if seen.iter().any(|s| !s) {
            return Err(Error::NotPartition("groups do not cover every index".into()));
        }
        let blocks: Vec<CMatrix> = groups
            .iter()
            .map(|g| {
                let v = linalg::select_columns(basis, g);
                &v * v.adjoint()
            })
            .collect();
        let traces = groups.iter().map(|g| g.len() as f64 / d as f64).collect();
        Ok(Self { blocks, traces, basis: basis.clone(), groups })
    }

    /// Coordinate projections onto the index groups.
    pub fn coordinate(d: usize, groups: Vec<Vec<usize>>) -> Result<Self> {
        Self::from_basis(&linalg::identity(d), groups)
    }

    /// The single block `{I}`.
    pub fn trivial(d: usize) -> Self {
        Self::coordinate(d, vec![(0..d).collect()]).expect("one full group")
    }

    pub fn d(&self) -> usize {
        self.basis.nrows()
    }

    pub fn len(&self) -> usize {
        self.blocks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.blocks.is_empty()
    }

    pub fn blocks(&self) -> &[CMatrix] {
        &self.blocks
    }

    pub fn traces(&self) -> &[f64] {
        &self.traces
    }

    pub fn ranks(&self) -> Vec<usize> {
        self.groups.iter().map(Vec::len).collect()
    }

    /// Orthonormal basis adapted to the blocks, with the column groups.
    pub fn adapted_basis(&self) -> (&CMatrix, &[Vec<usize>]) {
        (&self.basis, &self.groups)
    }

    /// Isometry onto the range of block `j`.
    pub fn range(&self, j: usize) -> CMatrix {
        linalg::select_columns(&self.basis, &self.groups[j])
    }

    /// Every trace equals `1/m`.
    pub fn is_uniform(&self) -> bool {
        let m = self.len() as f64;
        self.traces.iter().all(|t| (t - 1.0 / m).abs() <= tol::PROJECTION)
    }

    /// `x ↦ Σ_j (τ(x p_j)/τ(p_j)) p_j`.
    pub fn expectation(&self, x: &CMatrix) -> CMatrix {
        let mut out = linalg::zeros(self.d());
        for (p, t) in self.blocks.iter().zip(&self.traces) {
            out += p * (linalg::ntrace(&(x * p)) / *t);
        }
        out
    }
}

/// The conditional expectation as a map on matrices.
impl MatrixMap for ProjectionPartition {
    fn dim(&self) -> usize {
        self.d()
    }

    fn apply(&self, x: &CMatrix) -> CMatrix {
        self.expectation(x)
    }
}

/// Trace-preserving conditional expectation of every member onto the
/// abelian algebra spanned by the partition.
pub fn pinch(fam: &CommutingFamily, part: &ProjectionPartition) -> Result<CommutingFamily> {
    if fam.d() != part.d() {
        return Err(Error::DimensionMismatch { expected: fam.d(), got: part.d() });
    }
    let members = fam
        .members()
        .iter()
        .map(|b| HermitianMatrix::new(part.expectation(b.matrix())))
        .collect::<Result<Vec<_>>>()?;
    CommutingFamily::new(members)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::random;

    #[test]
    fn pinch_examples() {
        let f = CommutingFamily::from_diagonals(&[vec![1.0, 2.0, 3.0, 4.0]]).unwrap();
        let p = ProjectionPartition::coordinate(4, vec![vec![0, 1], vec![2, 3]]).unwrap();
        let g = pinch(&f, &p).unwrap();
        assert!(linalg::max_abs(&(g.member(0).matrix() - linalg::real_diag(&[1.5, 1.5, 3.5, 3.5]))) < 1e-15);

        let full = pinch(&f, &ProjectionPartition::trivial(4)).unwrap();
        assert!(linalg::max_abs(&(full.member(0).matrix() - linalg::identity(4) * linalg::c(2.5))) < 1e-15);

        let ones = ProjectionPartition::coordinate(4, (0..4).map(|i| vec![i]).collect()).unwrap();
        assert_eq!(pinch(&f, &ones).unwrap(), f);
    }

    #[test]
    fn validation() {
        assert!(ProjectionPartition::coordinate(3, vec![vec![0], vec![1]]).is_err());
        assert!(ProjectionPartition::coordinate(2, vec![vec![0, 1], vec![1]]).is_err());
        let half = linalg::identity(2) * linalg::c(0.5);
        assert!(ProjectionPartition::new(vec![half.clone(), half]).is_err());
    }

    #[test]
    fn general_blocks_recover_basis() {
        let mut rng = random::generator(2);
        let u = random::unitary(6, &mut rng);
        let p = ProjectionPartition::from_basis(&u, vec![vec![0, 3], vec![1, 2], vec![4, 5]]).unwrap();
        assert!(p.is_uniform());
        let q = ProjectionPartition::new(p.blocks().to_vec()).unwrap();
        assert_eq!(q.ranks(), vec![2, 2, 2]);
        for j in 0..3 {
            let v = q.range(j);
            assert!(linalg::max_abs(&(&v * v.adjoint() - &p.blocks()[j])) < 1e-10);
        }
    }

    #[test]
    fn pinch_preserves_trace() {
        let mut rng = random::generator(8);
        for _ in 0..20 {
            let f = random::commuting_family(6, 2, &mut rng);
            let u = random::unitary(6, &mut rng);
            let p = ProjectionPartition::from_basis(&u, random::uniform_groups(6, 3, &mut rng)).unwrap();
            let g = pinch(&f, &p).unwrap();
            for (a, b) in f.members().iter().zip(g.members()) {
                assert!((a.trace() - b.trace()).abs() < tol::moment_tol(a.trace(), b.trace()));
            }
        }
    }

    #[test]
    fn json_groups_form() {
        let p: ProjectionPartition = serde_json::from_str(r#"{"d":3,"groups":[[0,2],[1]]}"#).unwrap();
        assert_eq!(p.ranks(), vec![2, 1]);
        let back: ProjectionPartition = serde_json::from_str(&serde_json::to_string(&p).unwrap()).unwrap();
        assert_eq!(back.ranks(), vec![2, 1]);
    }
}
