//! Discrete and piecewise-uniform measures: moments, equivalence, splits and
//! equal-mass cuts.

use jointmaj::measures::{equivalent, verify_split_majorization_witness, Atom, UniformPiece};
use jointmaj::{DiscreteMeasure, MeasureSplit, PiecewiseUniformMeasure};

fn main() -> jointmaj::Result<()> {
    let mu = DiscreteMeasure::on_line(&[(-1.0, 0.5), (1.0, 0.5)])?;
    let nu = DiscreteMeasure::on_line(&[(-2.0, 0.25), (0.0, 0.5), (2.0, 0.25)])?;
    println!("mass {} / {}, barycenter {:?} / {:?}", mu.total_mass(), nu.total_mass(), mu.barycenter(), nu.barycenter());
    println!("equivalent: {}", equivalent(&mu, &nu)?);

    // Each half of mu is matched by a part of nu with the same moments.
    let mu_split = MeasureSplit::new(vec![mu.restrict(&[0])?, mu.restrict(&[1])?])?;
    let nu_split = MeasureSplit::new(vec![
        DiscreteMeasure::new(1, vec![Atom::new(vec![-2.0], 0.25), Atom::new(vec![0.0], 0.25)])?,
        DiscreteMeasure::new(1, vec![Atom::new(vec![0.0], 0.25), Atom::new(vec![2.0], 0.25)])?,
    ])?;
    println!("split witness holds: {}", verify_split_majorization_witness(&mu_split, &nu_split)?);

    let lebesgue = PiecewiseUniformMeasure::new(vec![UniformPiece::new(0.0, 1.0, 0.5), UniformPiece::new(2.0, 3.0, 0.5)])?;
    let left_third = lebesgue.split_with_mass(1.0 / 3.0)?;
    println!("leftmost set of mass 1/3: {:?}", left_third.segments());
    println!("cdf(2.5) = {}", lebesgue.cdf(2.5));
    Ok(())
}
