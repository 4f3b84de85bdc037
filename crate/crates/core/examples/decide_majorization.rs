//! Deciding joint majorization with the kernel LP and comparing against the
//! one-dimensional potential test and the convex battery.

use jointmaj::measures::Atom;
use jointmaj::transport::{convex_battery_measures, decide_majorization, potential_oracle_1d};
use jointmaj::DiscreteMeasure;

fn main() -> jointmaj::Result<()> {
    let tight = DiscreteMeasure::on_line(&[(-1.0, 0.5), (1.0, 0.5)])?;
    let wide = DiscreteMeasure::on_line(&[(-2.0, 0.5), (2.0, 0.5)])?;
    let d = decide_majorization(&tight, &wide)?;
    println!("tight ≺ wide: {} with K = {:?}", d.feasible, d.witness.map(|k| k.k));
    println!("wide ≺ tight: {}", decide_majorization(&wide, &tight)?.feasible);
    println!("potential test agrees: {}", potential_oracle_1d(&tight, &wide)?);

    let corners = DiscreteMeasure::new(
        2,
        [(-1.0, -1.0), (-1.0, 1.0), (1.0, -1.0), (1.0, 1.0)].iter().map(|&(x, y)| Atom::new(vec![x, y], 0.25)).collect(),
    )?;
    let origin = DiscreteMeasure::dirac(vec![0.0, 0.0], 1.0)?;
    println!("origin ≺ square corners: {}", decide_majorization(&origin, &corners)?.feasible);
    let battery = convex_battery_measures(&corners, &origin, 64, 0)?;
    println!("corners ≺ origin refuted by the battery: {}", !battery.passed);
    Ok(())
}
