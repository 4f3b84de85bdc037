use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::{self, CMatrix};
use crate::maps::{MatrixMap, MixedUnitary, UnitaryTerm};
use crate::speclin::{HermitianMatrix, ProjectionPartition};

#[derive(Clone, Debug, Serialize)]
pub struct DixmierAverage {
    pub terms: MixedUnitary,
    pub result: HermitianMatrix,
}

/// Cyclic shift `C e_c = e_{c+1 mod n}` raised to the power `h`.
fn shift_power(n: usize, h: usize) -> CMatrix {
    let image: Vec<usize> = (0..n).map(|c| (c + h) % n).collect();
    linalg::permutation_matrix(&image)
}

/// `Σ_h (1/d) Ad(U C^h U*) b` with `b = U diag(λ) U*`; equals `τ(b) I`.
pub fn dixmier_average(b: &HermitianMatrix) -> Result<DixmierAverage> {
    let d = b.dim();
    let (_, u) = linalg::hermitian_eigen(b.matrix());
    let terms = MixedUnitary::uniform((0..d).map(|h| &u * shift_power(d, h) * u.adjoint()).collect())?;
    let result = HermitianMatrix::new(terms.apply(b.matrix()))?;
    Ok(DixmierAverage { terms, result })
}

/// One factor per block `p_i`: the `2 d_i` unitaries `±u_h + (1 − p_i)`,
/// where `u_h` cycles an eigenbasis of the compression of `b` to `ran p_i`.
/// The factors compose, in order, to `Σ_i (τ(b p_i)/τ(p_i)) p_i`.
#[derive(Clone, Debug, Serialize)]
pub struct BlockDixmier {
    pub factors: Vec<MixedUnitary>,
    pub result: HermitianMatrix,
}

impl MatrixMap for BlockDixmier {
    fn dim(&self) -> usize {
        self.result.dim()
    }

    fn apply(&self, x: &CMatrix) -> CMatrix {
        self.factors.iter().fold(x.clone(), |acc, f| f.apply(&acc))
    }
}

/// Blocks that are not coordinate projections are handled in the
/// partition's adapted basis, which is folded into the returned unitaries.
pub fn block_dixmier(b: &HermitianMatrix, p: &ProjectionPartition) -> Result<BlockDixmier> {
    let d = b.dim();
    if p.d() != d {
        return Err(Error::DimensionMismatch { expected: d, got: p.d() });
    }
    let mut current = b.matrix().clone();
    let mut factors = Vec::with_capacity(p.len());
    for (i, block) in p.blocks().iter().enumerate() {
        let v = p.range(i);
        let n = v.ncols();
        let compressed = v.adjoint() * &current * &v;
        let (_, w) = linalg::hermitian_eigen(&compressed);
        let vw = &v * w;
        let rest = linalg::identity(d) - block;
        let mut terms = Vec::with_capacity(2 * n);
        for h in 0..n {
            let u = &vw * shift_power(n, h) * vw.adjoint();
            for sign in [1.0, -1.0] {
                terms.push(UnitaryTerm { weight: 0.5 / n as f64, unitary: &u * linalg::c(sign) + &rest });
            }
        }
        let factor = MixedUnitary::new(terms)?;
        current = factor.apply(&current);
        factors.push(factor);
    }
    let result = HermitianMatrix::new(current)?;
    Ok(BlockDixmier { factors, result })
}
