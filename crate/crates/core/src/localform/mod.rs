//! Equal-mass partition schemes, averaging maps, finite Dixmier averages,
//! atom refinement, and the approximation of a doubly stochastic map on an
//! abelian family by convex combinations of unitary conjugations.

mod averaging;
mod dixmier;
mod pipeline;
mod refine;
mod scheme;

pub use averaging::{averaging_contraction_check, averaging_map, StepFunction};
pub use dixmier::{block_dixmier, dixmier_average, BlockDixmier, DixmierAverage};
pub use pipeline::{local_form_approximate, LocalFormChannel, LocalFormOptions, LocalFormReport, PairChannel};
pub use refine::{interval_schedule, refine_all, refine_atom, HybridMeasure, LineAtom};
pub use scheme::{build_partition_scheme, PartitionScheme, SchemeCell, SchemeSchedule};
