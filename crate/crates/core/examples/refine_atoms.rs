//! Replacing atoms of a measure on the line by uniform densities on disjoint
//! intervals, giving a diffuse measure.

use jointmaj::localform::{interval_schedule, refine_all, refine_atom, HybridMeasure};
use jointmaj::DiscreteMeasure;

fn main() -> jointmaj::Result<()> {
    let mu = DiscreteMeasure::on_line(&[(0.0, 0.5), (1.0, 0.3), (3.0, 0.2)])?;
    let h = HybridMeasure::from_discrete(&mu)?;
    for i in 1..=3 {
        println!("I_{i} = {:?}", interval_schedule(i)?);
    }
    let one = refine_atom(&h, 0, 5.0, 6.0)?;
    println!("after one step: {} atoms, {} densities", one.atoms.len(), one.intervals.len());
    let all = refine_all(&h)?;
    println!("diffuse {}, mass {}, disjoint {}", all.is_diffuse(), all.total_mass(), all.supports_disjoint());
    Ok(())
}
