//! Joint majorization of discrete measures decided by transport-LP
//! feasibility, kernel synthesis, refutation oracles, and the lift of a
//! kernel to a doubly stochastic map on matrices.

mod decide;
mod dsmap;
mod kernel;
mod oracles;
mod synth;

pub use decide::{decide_majorization, decide_majorization_with, Decision};
pub use dsmap::{ds_map_from_kernel, DsMap};
pub use kernel::{KernelResiduals, TransportKernel};
pub use oracles::{
    battery_with_functions, convex_battery_measures, convex_battery_test, potential_oracle_1d, BatteryOutcome,
    MaxAffine,
};
pub use synth::{partition_cells, synthesize_kernel_partition};
