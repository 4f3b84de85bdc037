//! Equal-mass partition schemes of a piecewise-uniform measure.

use jointmaj::localform::{build_partition_scheme, SchemeSchedule};
use jointmaj::measures::UniformPiece;
use jointmaj::PiecewiseUniformMeasure;

fn main() -> jointmaj::Result<()> {
    let mu = PiecewiseUniformMeasure::new(vec![UniformPiece::new(0.0, 0.5, 1.0), UniformPiece::new(0.5, 0.75, 2.0)])?;
    let s = build_partition_scheme(&mu, 5)?;
    println!("r = {}: m = {}, k = {}", s.r, s.m, s.k);
    for cell in s.cells[0].iter().take(4) {
        println!("  {:?} mass {:.4} small {}", cell.set.segments(), cell.mass, cell.small_diameter);
    }
    println!("mass defect {:.1e}, partition defect {:.1e}", s.mass_defect(), s.partition_defect());

    let (schedule, _) = SchemeSchedule::build(&mu, &[1, 2, 4, 8], 4096)?;
    println!("(r, m, k) schedule: {:?}", schedule.resolutions);
    Ok(())
}
