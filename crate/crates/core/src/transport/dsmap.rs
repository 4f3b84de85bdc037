use super::kernel::TransportKernel;
use crate::error::{Error, Result};
use crate::linalg::{self, CMatrix, C64};
use crate::maps::MatrixMap;
use crate::speclin::{joint_diagonalize, CommutingFamily};
use crate::tol;

/// `T = Λ_a ∘ K ∘ Λ_b⁻¹ ∘ P_B`: pinch onto the joint eigenbasis of the
/// source family, average over each joint eigenspace, transport the values
/// with the kernel, and rebuild in the eigenbasis of the target family.
#[derive(Clone, Debug)]
pub struct DsMap {
    ua: CMatrix,
    ub: CMatrix,
    atom_of_a: Vec<usize>,
    atom_of_b: Vec<usize>,
    mult_b: Vec<usize>,
    k: Vec<Vec<f64>>,
}

impl MatrixMap for DsMap {
    fn dim(&self) -> usize {
        self.ua.nrows()
    }

    fn apply(&self, x: &CMatrix) -> CMatrix {
        let d = self.dim();
        let y = self.ub.adjoint() * x * &self.ub;
        let mut avg = vec![C64::new(0.0, 0.0); self.mult_b.len()];
        for c in 0..d {
            avg[self.atom_of_b[c]] += y[(c, c)];
        }
        for (a, m) in avg.iter_mut().zip(&self.mult_b) {
            *a /= *m as f64;
        }
        let mut z = linalg::zeros(d);
        for c in 0..d {
            let row = &self.k[self.atom_of_a[c]];
            z[(c, c)] = row.iter().zip(&avg).map(|(k, v)| v * *k).sum();
        }
        &self.ua * z * self.ua.adjoint()
    }
}

/// Lifts a kernel between the joint spectral measures of `fam_a` (rows)
/// and `fam_b` (columns) to a doubly stochastic map with `T(b_i) = a_i`.
pub fn ds_map_from_kernel(
    kernel: &TransportKernel,
    fam_a: &CommutingFamily,
    fam_b: &CommutingFamily,
    seed: u64,
) -> Result<DsMap> {
    if fam_a.d() != fam_b.d() {
        return Err(Error::DimensionMismatch { expected: fam_a.d(), got: fam_b.d() });
    }
    let (ja, jb) = (joint_diagonalize(fam_a, seed)?, joint_diagonalize(fam_b, seed)?);
    if !ja.measure().approx_eq(&kernel.mu, tol::POINT_MERGE, tol::MASS) {
        return Err(Error::MeasureMismatch("kernel rows do not match the target family".into()));
    }
    if !jb.measure().approx_eq(&kernel.nu, tol::POINT_MERGE, tol::MASS) {
        return Err(Error::MeasureMismatch("kernel columns do not match the source family".into()));
    }
    let atom_of_a = ja.column_atoms(&kernel.mu, tol::POINT_MERGE)?;
    let atom_of_b = jb.column_atoms(&kernel.nu, tol::POINT_MERGE)?;
    let mut mult_b = vec![0; kernel.nu.len()];
    for &t in &atom_of_b {
        mult_b[t] += 1;
    }
    Ok(DsMap { ua: ja.basis, ub: jb.basis, atom_of_a, atom_of_b, mult_b, k: kernel.k.clone() })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::maps::doubly_stochastic_defect;
    use crate::measures::DiscreteMeasure;
    use crate::random;
    use crate::speclin::joint_spectral_measure;
    use crate::transport::decide_majorization;

    #[test]
    fn identity_kernel_is_diagonal_pinching() {
        let f = CommutingFamily::from_diagonals(&[vec![1.0, 2.0, 2.0]]).unwrap();
        let mu = joint_spectral_measure(&f, 0).unwrap();
        let k = decide_majorization(&mu, &mu).unwrap().witness.unwrap();
        let t = ds_map_from_kernel(&k, &f, &f, 0).unwrap();
        assert!(linalg::max_abs(&(t.apply(f.member(0).matrix()) - f.member(0).matrix())) < 1e-12);
        let x = linalg::from_real_rows(&[vec![1.0, 5.0, 0.0], vec![5.0, 2.0, 1.0], vec![0.0, 1.0, 4.0]]).unwrap();
        assert!(linalg::max_abs(&(t.apply(&x) - linalg::real_diag(&[1.0, 3.0, 3.0]))) < 1e-12);
    }

    #[test]
    fn dirac_kernel_averages() {
        let a = CommutingFamily::from_diagonals(&[vec![1.0, 1.0]]).unwrap();
        let b = CommutingFamily::from_diagonals(&[vec![0.0, 2.0]]).unwrap();
        let k = decide_majorization(&joint_spectral_measure(&a, 0).unwrap(), &joint_spectral_measure(&b, 0).unwrap())
            .unwrap()
            .witness
            .unwrap();
        let t = ds_map_from_kernel(&k, &a, &b, 0).unwrap();
        assert!(linalg::max_abs(&(t.apply(b.member(0).matrix()) - a.member(0).matrix())) < 1e-12);
    }

    // ¾/¼ kernel on d = 2: row s = −1 gives ¾·(−2) + ¼·2 = −1.
    #[test]
    fn three_quarter_kernel_on_diagonals() {
        let a = CommutingFamily::from_diagonals(&[vec![-1.0, 1.0]]).unwrap();
        let b = CommutingFamily::from_diagonals(&[vec![-2.0, 2.0]]).unwrap();
        let mu = DiscreteMeasure::on_line(&[(-1.0, 0.5), (1.0, 0.5)]).unwrap();
        let nu = DiscreteMeasure::on_line(&[(-2.0, 0.5), (2.0, 0.5)]).unwrap();
        let k = TransportKernel::new(mu, nu, vec![vec![0.75, 0.25], vec![0.25, 0.75]]).unwrap();
        let t = ds_map_from_kernel(&k, &a, &b, 0).unwrap();
        assert!(linalg::max_abs(&(t.apply(b.member(0).matrix()) - linalg::real_diag(&[-1.0, 1.0]))) < 1e-12);
    }

    #[test]
    fn mismatch_is_an_error() {
        let a = CommutingFamily::from_diagonals(&[vec![-1.0, 1.0]]).unwrap();
        let mu = DiscreteMeasure::on_line(&[(0.0, 1.0)]).unwrap();
        let k = TransportKernel::new(mu.clone(), mu, vec![vec![1.0]]).unwrap();
        assert!(matches!(ds_map_from_kernel(&k, &a, &a, 0), Err(Error::MeasureMismatch(_))));
    }

    #[test]
    fn random_lift_is_doubly_stochastic() {
        let mut rng = random::generator(5);
        let b = random::commuting_family(6, 2, &mut rng);
        let p = crate::speclin::ProjectionPartition::from_basis(&random::unitary(6, &mut rng), random::uniform_groups(6, 2, &mut rng)).unwrap();
        let a = crate::speclin::pinch(&b, &p).unwrap();
        let (ma, mb) = (joint_spectral_measure(&a, 1).unwrap(), joint_spectral_measure(&b, 1).unwrap());
        let k = decide_majorization(&ma, &mb).unwrap().witness.unwrap();
        let t = ds_map_from_kernel(&k, &a, &b, 1).unwrap();
        let probes: Vec<CMatrix> = (0..10).map(|_| random::hermitian(6, &mut rng).into_matrix()).collect();
        assert!(doubly_stochastic_defect(&t, &probes) < tol::FUNCTIONAL_CALCULUS);
        for (x, y) in a.members().iter().zip(b.members()) {
            assert!(linalg::max_abs(&(t.apply(y.matrix()) - x.matrix())) < tol::FUNCTIONAL_CALCULUS);
        }
    }
}
