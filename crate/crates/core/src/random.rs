//! Seeded random matrices and families.
//!
//! All randomness in the crate flows from a 64-bit seed through
//! [`GENERATOR_NAME`], so every campaign is reproducible.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::birkhoff::DoublyStochasticMatrix;
use crate::linalg::{self, CMatrix, C64};
use crate::speclin::{CommutingFamily, HermitianMatrix};

pub const GENERATOR_NAME: &str = "chacha8-v1";

pub type Generator = ChaCha8Rng;

pub fn generator(seed: u64) -> Generator {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Haar-distributed unitary via QR of a complex Ginibre matrix.
pub fn unitary<R: Rng + ?Sized>(d: usize, rng: &mut R) -> CMatrix {
    let g = CMatrix::from_fn(d, d, |_, _| {
        C64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
    });
    let qr = g.qr();
    let (mut q, r) = qr.unpack();
    for j in 0..d {
        let rjj = r[(j, j)];
        let phase = if rjj.norm() > 0.0 { rjj / rjj.norm() } else { C64::new(1.0, 0.0) };
        for i in 0..d {
            q[(i, j)] *= phase;
        }
    }
    q
}

/// GUE-like Hermitian matrix with entries of unit scale.
pub fn hermitian<R: Rng + ?Sized>(d: usize, rng: &mut R) -> HermitianMatrix {
    let g = CMatrix::from_fn(d, d, |_, _| {
        C64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
    });
    let h = (&g + g.adjoint()) * linalg::c(0.5);
    HermitianMatrix::new(h).expect("symmetrized matrix is hermitian")
}

/// Family `u diag(tuples) u*` for the given joint eigentuples (one per column).
pub fn family_from_tuples(tuples: &[Vec<f64>], u: &CMatrix) -> CommutingFamily {
    let n = tuples.first().map_or(0, Vec::len);
    let members = (0..n)
        .map(|i| {
            let diag: Vec<f64> = tuples.iter().map(|t| t[i]).collect();
            HermitianMatrix::new(linalg::conjugate(u, &linalg::real_diag(&diag)))
                .expect("unitary conjugate of a real diagonal is hermitian")
        })
        .collect();
    CommutingFamily::new(members).expect("simultaneously diagonal family commutes")
}

/// Random joint eigentuples on a coarse grid so that multiplicities occur.
pub fn tuples<R: Rng + ?Sized>(d: usize, n: usize, rng: &mut R) -> Vec<Vec<f64>> {
    let atoms = rng.random_range(1..=d);
    let distinct: Vec<Vec<f64>> = (0..atoms)
        .map(|_| (0..n).map(|_| f64::from(rng.random_range(-8i32..=8)) * 0.25).collect())
        .collect();
    (0..d)
        .map(|c| if c < atoms { distinct[c].clone() } else { distinct[rng.random_range(0..atoms)].clone() })
        .collect()
}

/// Random commuting family in a Haar-random eigenbasis.
pub fn commuting_family<R: Rng + ?Sized>(d: usize, n: usize, rng: &mut R) -> CommutingFamily {
    let t = tuples(d, n, rng);
    let u = unitary(d, rng);
    family_from_tuples(&t, &u)
}

/// Partition of `0..d` into `m` consecutive groups of size `d/m` after a
/// random shuffle.
pub fn uniform_groups<R: Rng + ?Sized>(d: usize, m: usize, rng: &mut R) -> Vec<Vec<usize>> {
    use rand::seq::SliceRandom;
    assert!(m > 0 && d.is_multiple_of(m), "m must divide d");
    let mut idx: Vec<usize> = (0..d).collect();
    idx.shuffle(rng);
    idx.chunks(d / m).map(|c| c.to_vec()).collect()
}

/// Sinkhorn balancing of a matrix with uniform `(0, 1]` entries; a generic
/// point in the interior of the Birkhoff polytope.
pub fn doubly_stochastic<R: Rng + ?Sized>(m: usize, rng: &mut R) -> DoublyStochasticMatrix {
    let mut a: Vec<Vec<f64>> = (0..m).map(|_| (0..m).map(|_| 1.0 - rng.random::<f64>()).collect()).collect();
    for _ in 0..10_000 {
        for row in a.iter_mut() {
            let s: f64 = row.iter().sum();
            row.iter_mut().for_each(|v| *v /= s);
        }
        let mut worst: f64 = 0.0;
        for j in 0..m {
            let s: f64 = a.iter().map(|r| r[j]).sum();
            worst = worst.max((s - 1.0).abs());
            a.iter_mut().for_each(|r| r[j] /= s);
        }
        if worst < 1e-15 {
            break;
        }
    }
    DoublyStochasticMatrix::new(a).expect("Sinkhorn converged")
}

/// Random convex combination of `terms` random permutation matrices.
pub fn permutation_mixture<R: Rng + ?Sized>(m: usize, terms: usize, rng: &mut R) -> DoublyStochasticMatrix {
    use rand::seq::SliceRandom;
    let weights: Vec<f64> = (0..terms.max(1)).map(|_| 1.0 - rng.random::<f64>()).collect();
    let total: f64 = weights.iter().sum();
    let mut a = vec![vec![0.0; m]; m];
    for w in weights {
        let mut sigma: Vec<usize> = (0..m).collect();
        sigma.shuffle(rng);
        for (i, &j) in sigma.iter().enumerate() {
            a[i][j] += w / total;
        }
    }
    DoublyStochasticMatrix::new(a).expect("mixture of permutations")
}
