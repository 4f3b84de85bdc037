//! Simultaneous diagonalization of a commuting family, its joint spectral
//! measure and the functional calculus.

use jointmaj::random;
use jointmaj::speclin::{functional_calculus, joint_diagonalize};

fn main() -> jointmaj::Result<()> {
    let mut rng = random::generator(11);
    let tuples = vec![vec![1.0, 0.0], vec![1.0, 0.0], vec![0.0, 1.0], vec![-1.0, -1.0]];
    let fam = random::family_from_tuples(&tuples, &random::unitary(4, &mut rng));

    let jd = joint_diagonalize(&fam, 0)?;
    for atom in jd.measure().atoms() {
        println!("eigentuple {:?} with mass {}", atom.point, atom.mass);
    }
    let norm = functional_calculus(&fam, &|x: &[f64]| x.iter().map(|v| v * v).sum::<f64>(), 0)?;
    println!("tr(a1² + a2²)/d = {:.6}", norm.trace());
    Ok(())
}
