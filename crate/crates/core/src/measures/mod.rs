//! Finitely supported and piecewise-uniform measures, moments, equal-mass
//! splitting and split-based majorization witnesses.

mod discrete;
mod split;
mod uniform;

pub use discrete::{equivalent, Atom, DiscreteMeasure};
pub(crate) use discrete::{lex_cmp as lex_cmp_points, sup_dist};
pub use split::{verify_split_majorization_witness, MeasureSplit};
pub use uniform::{IntervalSet, PiecewiseUniformMeasure, Segment, UniformPiece};
