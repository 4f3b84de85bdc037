//! Joint majorization for commuting Hermitian families and finitely supported
//! measures on `R^n`.
//!
//! The crate decides whether one abelian family (or discrete measure) is
//! jointly majorized by another, and builds the witnesses that certify it:
//!
//! - [`transport`]: barycenter-preserving transport kernels found by LP
//!   feasibility, plus two independent refutation oracles and the lift of a
//!   kernel to a doubly stochastic map on matrices.
//! - [`birkhoff`]: doubly stochastic matrices, Birkhoff decomposition and the
//!   local-form identity `Σ α_i p_i = ρ(Σ β_i q_i)`.
//! - [`localform`]: equal-mass partition schemes, averaging maps, finite
//!   Dixmier averages and the end-to-end approximation of a doubly stochastic
//!   map by convex combinations of unitary conjugations.
//! - [`speclin`]: simultaneous diagonalization, joint spectral measures,
//!   functional calculus, pinching and approximate unitary equivalence.
//! - [`measures`]: discrete and piecewise-uniform measures.
//!
//! The `examples/` directory has one runnable program per capability; the
//! `jointmaj` binary is a thin JSON front end over [`cli`].

pub mod birkhoff;
pub mod cli;
pub mod error;
pub mod linalg;
pub mod localform;
pub mod lp;
pub mod maps;
pub mod measures;
pub mod random;
pub mod speclin;
pub mod tol;
pub mod transport;

pub use error::{Error, Result};
pub use linalg::{CMatrix, C64};
pub use maps::{Conjugation, IdentityMap, MatrixMap, MixedUnitary, TraceMap};
pub use measures::{DiscreteMeasure, IntervalSet, MeasureSplit, PiecewiseUniformMeasure};
pub use speclin::{CommutingFamily, HermitianMatrix, JointDiagonalization, ProjectionPartition};
