//! Numerical tolerances shared across modules.
//!
//! Measure arithmetic runs one order tighter than the LP residual checks,
//! and every composed matrix operation gets one order of slack over the
//! layer beneath it.

/// Sup-norm distance under which two atoms are merged.
pub const POINT_MERGE: f64 = 1e-9;
/// Absolute tolerance on masses.
pub const MASS: f64 = 1e-9;
/// Relative tolerance on first moments; see [`moment_tol`].
pub const MOMENT_REL: f64 = 1e-8;
/// Hermiticity and commutation, relative to the largest entry.
pub const HERMITIAN_REL: f64 = 1e-8;
pub const COMMUTATOR_REL: f64 = 1e-8;
pub const UNITARY: f64 = 1e-8;
/// Diagonalization residual, relative to the largest entry (floor 1).
pub const DIAG: f64 = 1e-8;
pub const FUNCTIONAL_CALCULUS: f64 = 1e-7;
pub const PROJECTION: f64 = 1e-9;
pub const EQUIVALENCE: f64 = 1e-6;
/// Relative eigenvalue gap under which eigenvalues are clustered.
pub const CLUSTER_REL: f64 = 1e-7;
pub const LP: f64 = 1e-8;
pub const DOUBLY_STOCHASTIC: f64 = 1e-9;
/// Birkhoff reconstruction tolerance per unit of matrix size.
pub const RECONSTRUCTION_PER_M: f64 = 1e-10;
pub const LOCAL_FORM: f64 = 1e-9;

/// Default dimension cap for dense matrix inputs.
pub const DEFAULT_DIM_CAP: usize = 256;
/// Default cap on the number of cells `m` of a partition scheme.
pub const DEFAULT_M_CAP: usize = 4096;

/// `ε_mom · (1 + |moment|)` with the larger of the two compared moments.
pub fn moment_tol(a: f64, b: f64) -> f64 {
    MOMENT_REL * (1.0 + a.abs().max(b.abs()))
}

/// Tolerances a caller may override at run time.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Tolerances {
    pub lp: f64,
    pub functional_calculus: f64,
    pub reconstruction_per_m: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            lp: LP,
            functional_calculus: FUNCTIONAL_CALCULUS,
            reconstruction_per_m: RECONSTRUCTION_PER_M,
        }
    }
}
