//! Commuting Hermitian families in finite dimension: simultaneous
//! diagonalization, joint spectral measures, functional calculus, pinching
//! and approximate unitary equivalence.

mod diag;
mod equivalence;
mod family;
mod partition;

pub use diag::{functional_calculus, joint_diagonalize, joint_spectral_measure, JointDiagonalization};
pub use equivalence::{approx_unitarily_equivalent, EquivalenceVerdict};
pub use family::{trace, CommutingFamily, HermitianMatrix};
pub use partition::{pinch, ProjectionPartition};
