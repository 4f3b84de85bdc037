use rand::Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use super::family::{CommutingFamily, HermitianMatrix};
use crate::error::{Error, Result};
use crate::linalg::{self, CMatrix};
use crate::measures::{lex_cmp_points, Atom, DiscreteMeasure};
use crate::random;
use crate::tol;

/// Unitary `U` with `U* a_i U` diagonal for every member, together with the
/// joint eigentuples (column `c` carries `(λ_1c, …, λ_nc)`), sorted
/// lexicographically.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct JointDiagonalization {
    #[serde(with = "linalg::matrix_serde")]
    pub basis: CMatrix,
    pub eigentuples: Vec<Vec<f64>>,
}

impl JointDiagonalization {
    pub fn d(&self) -> usize {
        self.eigentuples.len()
    }

    /// Eigentuples weighted `1/d`, merged.
    pub fn measure(&self) -> DiscreteMeasure {
        let w = 1.0 / self.d() as f64;
        let atoms = self.eigentuples.iter().map(|t| Atom::new(t.clone(), w)).collect();
        DiscreteMeasure::new(self.eigentuples[0].len(), atoms).expect("eigentuples are finite")
    }

    /// Atom of `measure` each column belongs to.
    pub fn column_atoms(&self, measure: &DiscreteMeasure, tol_pt: f64) -> Result<Vec<usize>> {
        self.eigentuples
            .iter()
            .map(|t| {
                measure.locate(t, tol_pt).ok_or_else(|| {
                    Error::MeasureMismatch(format!("eigentuple {t:?} has no atom within {tol_pt:e}"))
                })
            })
            .collect()
    }

    /// Columns grouped by atom of [`Self::measure`].
    pub fn eigenspaces(&self) -> Vec<Vec<usize>> {
        let mu = self.measure();
        let owner = self.column_atoms(&mu, tol::POINT_MERGE).expect("columns merge into their own measure");
        let mut groups = vec![Vec::new(); mu.len()];
        for (c, a) in owner.into_iter().enumerate() {
            groups[a].push(c);
        }
        groups
    }
}

fn is_scalar(m: &CMatrix, tol: f64) -> bool {
    let k = m.nrows();
    let mean = m.trace() / k as f64;
    let mut dev = m.clone();
    for i in 0..k {
        dev[(i, i)] -= mean;
    }
    linalg::max_abs(&dev) <= tol
}

/// Unitary diagonalizing every matrix in `mats` (all `k×k`, commuting).
fn split<R: Rng>(mats: &[CMatrix], scale: f64, rng: &mut R, depth: usize) -> Result<CMatrix> {
    let k = mats[0].nrows();
    let scalar_tol = 1e-10 * scale;
    if k == 1 || mats.iter().all(|m| is_scalar(m, scalar_tol)) {
        return Ok(linalg::identity(k));
    }
    if depth == 0 {
        return Err(Error::DiagonalizationFailed { residual: f64::NAN });
    }
    for _ in 0..8 {
        let mut h = linalg::zeros(k);
        for m in mats {
            let c: f64 = rng.sample(StandardNormal);
            h += m * linalg::c(c);
        }
        let (vals, vecs) = linalg::hermitian_eigen(&h);
        let spread = vals[k - 1] - vals[0];
        if spread <= scalar_tol {
            continue;
        }
        let gap = tol::CLUSTER_REL * spread.max(scale);
        let mut clusters: Vec<Vec<usize>> = vec![vec![0]];
        for i in 1..k {
            if vals[i] - vals[i - 1] >= gap {
                clusters.push(Vec::new());
            }
            clusters.last_mut().expect("nonempty").push(i);
        }
        if clusters.len() == 1 {
            continue;
        }
        let mut out = linalg::zeros(k);
        let mut col = 0;
        for cl in &clusters {
            let v = linalg::select_columns(&vecs, cl);
            let comp: Vec<CMatrix> = mats.iter().map(|m| v.adjoint() * m * &v).collect();
            let w = split(&comp, scale, rng, depth - 1)?;
            let block = v * w;
            out.columns_mut(col, cl.len()).copy_from(&block);
            col += cl.len();
        }
        return Ok(out);
    }
    Err(Error::DiagonalizationFailed { residual: f64::NAN })
}

/// Simultaneous diagonalization by recursive splitting along random linear
/// combinations of the members. Deterministic given `seed`.
pub fn joint_diagonalize(fam: &CommutingFamily, seed: u64) -> Result<JointDiagonalization> {
    let d = fam.d();
    let mats: Vec<CMatrix> = fam.members().iter().map(|m| m.matrix().clone()).collect();
    let scale = mats.iter().map(linalg::max_abs).fold(1.0, f64::max);
    let mut rng = random::generator(seed);
    let u = split(&mats, scale, &mut rng, d + 8)?;

    let diag: Vec<CMatrix> = mats.iter().map(|m| u.adjoint() * m * &u).collect();
    let mut residual: f64 = 0.0;
    for m in &diag {
        let mut off = m.clone();
        for c in 0..d {
            off[(c, c)].im = 0.0;
            residual = residual.max(m[(c, c)].im.abs());
            off[(c, c)].re = 0.0;
        }
        residual = residual.max(linalg::max_abs(&off));
    }
    let bound = tol::DIAG * scale;
    if residual > bound || linalg::unitarity_defect(&u) > tol::UNITARY {
        return Err(Error::DiagonalizationFailed { residual });
    }

    let tuples: Vec<Vec<f64>> = (0..d).map(|c| diag.iter().map(|m| m[(c, c)].re).collect()).collect();
    let mut order: Vec<usize> = (0..d).collect();
    order.sort_by(|&a, &b| lex_cmp_points(&tuples[a], &tuples[b]).then(a.cmp(&b)));
    Ok(JointDiagonalization {
        basis: linalg::select_columns(&u, &order),
        eigentuples: order.iter().map(|&c| tuples[c].clone()).collect(),
    })
}

/// Joint eigentuples with mass `multiplicity/d`.
pub fn joint_spectral_measure(fam: &CommutingFamily, seed: u64) -> Result<DiscreteMeasure> {
    Ok(joint_diagonalize(fam, seed)?.measure())
}

/// `f(a_1, …, a_n) = U diag(f(λ_c)) U*`.
pub fn functional_calculus(
    fam: &CommutingFamily,
    f: &dyn Fn(&[f64]) -> f64,
    seed: u64,
) -> Result<HermitianMatrix> {
    let jd = joint_diagonalize(fam, seed)?;
    let values: Vec<f64> = jd.eigentuples.iter().map(|t| f(t)).collect();
    if values.iter().any(|v| !v.is_finite()) {
        return Err(Error::invalid("function is not finite on the joint spectrum"));
    }
    HermitianMatrix::new(linalg::conjugate(&jd.basis, &linalg::real_diag(&values)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::measures::equivalent;

    fn fam(rows: &[&[Vec<f64>]]) -> CommutingFamily {
        CommutingFamily::new(rows.iter().map(|r| HermitianMatrix::from_real_rows(r).unwrap()).collect()).unwrap()
    }

    #[test]
    fn diagonal_input() {
        let f = CommutingFamily::from_diagonals(&[vec![1.0, 1.0, 2.0]]).unwrap();
        let jd = joint_diagonalize(&f, 0).unwrap();
        assert_eq!(jd.eigentuples, vec![vec![1.0], vec![1.0], vec![2.0]]);
        let mu = jd.measure();
        assert!(mu.approx_eq(&DiscreteMeasure::on_line(&[(1.0, 2.0 / 3.0), (2.0, 1.0 / 3.0)]).unwrap(), 1e-12, 1e-12));
    }

    // Oracle: [[0,1],[1,0]] has eigenvectors (1,1)/√2 (λ=1) and (1,−1)/√2
    // (λ=−1); on the same vectors [[2,1],[1,2]] takes the values 3 and 1.
    #[test]
    fn two_by_two_pair() {
        let f = fam(&[&[vec![0.0, 1.0], vec![1.0, 0.0]], &[vec![2.0, 1.0], vec![1.0, 2.0]]]);
        for seed in 0..5 {
            let jd = joint_diagonalize(&f, seed).unwrap();
            assert_eq!(jd.eigentuples.len(), 2);
            assert!((jd.eigentuples[0][0] + 1.0).abs() < 1e-12 && (jd.eigentuples[0][1] - 1.0).abs() < 1e-12);
            assert!((jd.eigentuples[1][0] - 1.0).abs() < 1e-12 && (jd.eigentuples[1][1] - 3.0).abs() < 1e-12);
        }
        let mu = joint_spectral_measure(&f, 1).unwrap();
        let expect = DiscreteMeasure::new(
            2,
            vec![Atom::new(vec![1.0, 3.0], 0.5), Atom::new(vec![-1.0, 1.0], 0.5)],
        )
        .unwrap();
        assert!(mu.approx_eq(&expect, 1e-12, 1e-12));
    }

    #[test]
    fn identity_family() {
        for d in 1..6 {
            let f = CommutingFamily::new(vec![HermitianMatrix::identity(d)]).unwrap();
            let jd = joint_diagonalize(&f, 4).unwrap();
            assert!(jd.eigentuples.iter().all(|t| t == &vec![1.0]));
        }
    }

    #[test]
    fn two_projections() {
        let f = CommutingFamily::from_diagonals(&[vec![0.0, 1.0], vec![1.0, 0.0]]).unwrap();
        let mu = joint_spectral_measure(&f, 0).unwrap();
        let expect = DiscreteMeasure::new(
            2,
            vec![Atom::new(vec![0.0, 1.0], 0.5), Atom::new(vec![1.0, 0.0], 0.5)],
        )
        .unwrap();
        assert!(mu.approx_eq(&expect, 1e-12, 1e-12));
    }

    #[test]
    fn functional_calculus_examples() {
        let f = CommutingFamily::from_diagonals(&[vec![0.0, 2.0]]).unwrap();
        let sq = functional_calculus(&f, &|x| x[0] * x[0], 0).unwrap();
        assert!(linalg::max_abs(&(sq.matrix() - linalg::real_diag(&[0.0, 4.0]))) < 1e-12);
        let one = functional_calculus(&f, &|_| 1.0, 0).unwrap();
        assert!(linalg::max_abs(&(one.matrix() - linalg::identity(2))) < 1e-12);
    }

    #[test]
    fn random_families_recover_tuples_and_traces() {
        let mut rng = random::generator(11);
        for d in [1, 3, 7, 12] {
            for n in 1..4 {
                let tuples = random::tuples(d, n, &mut rng);
                let u = random::unitary(d, &mut rng);
                let f = random::family_from_tuples(&tuples, &u);
                let jd = joint_diagonalize(&f, 5).unwrap();
                let expect = DiscreteMeasure::new(
                    n,
                    tuples.iter().map(|t| Atom::new(t.clone(), 1.0 / d as f64)).collect(),
                )
                .unwrap();
                assert!(jd.measure().approx_eq(&expect, 1e-9, 1e-12));
                for (i, m) in f.members().iter().enumerate() {
                    let from_measure = jd.measure().integrate(|x| x[i]);
                    assert!((m.trace() - from_measure).abs() < 1e-10);
                    let back = functional_calculus(&f, &|x| x[i], 5).unwrap();
                    assert!(linalg::max_abs(&(back.matrix() - m.matrix())) < tol::FUNCTIONAL_CALCULUS);
                }
                assert!(equivalent(&jd.measure(), &expect).unwrap());
            }
        }
    }
}
