//! Doubly stochastic matrices, Birkhoff–von Neumann decomposition by
//! repeated perfect matching, and the local-form identity
//! `Σ α_i p_i = ρ(Σ β_i q_i)`.

mod coupling;
mod decompose;
mod matching;
mod matrix;

pub use coupling::{alpha_by_mixing, coupling_matrix, local_form_from_coupling, LocalForm, LocalFormTerm};
pub use decompose::{birkhoff_decompose, BirkhoffDecomposition, BirkhoffTerm};
pub use matching::perfect_matching;
pub use matrix::{DoublyStochasticMatrix, Permutation};
