//! Averaging a Lipschitz function over the cells of partition schemes: the
//! sup error shrinks as the resolution grows.

use jointmaj::localform::{averaging_map, build_partition_scheme};
use jointmaj::PiecewiseUniformMeasure;

fn main() -> jointmaj::Result<()> {
    let mu = PiecewiseUniformMeasure::uniform(0.0, 1.0)?;
    let f = |x: f64| (3.0 * x - 1.0).abs();
    for r in [1, 2, 4, 8, 16] {
        let s = build_partition_scheme(&mu, r)?;
        let step = averaging_map(&s, &f, true);
        let err = step.sup_error(&f, &[1.0 / 3.0], 16);
        println!("r = {r:2}: m = {:3}, sup error {err:.4}, bound {:.4}", s.m, 3.0 / r as f64 + 2.0 / s.k as f64);
    }
    Ok(())
}
