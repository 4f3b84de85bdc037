//! Approximate unitary equivalence of commuting families, with a witness.

use jointmaj::speclin::approx_unitarily_equivalent;
use jointmaj::random;

fn main() -> jointmaj::Result<()> {
    let mut rng = random::generator(4);
    let fam = random::commuting_family(6, 2, &mut rng);
    let moved = fam.conjugate(&random::unitary(6, &mut rng));
    let v = approx_unitarily_equivalent(&moved, &fam, 0)?;
    println!("conjugate: equivalent {} with residual {:?}", v.equivalent, v.residual);

    let mut tuples = vec![vec![0.0, 1.0]; 3];
    tuples.extend(vec![vec![1.0, 0.0]; 3]);
    let a = random::family_from_tuples(&tuples, &random::unitary(6, &mut rng));
    tuples[0][0] += 1e-3;
    let b = random::family_from_tuples(&tuples, &random::unitary(6, &mut rng));
    println!("perturbed spectrum: equivalent {}", approx_unitarily_equivalent(&a, &b, 0)?.equivalent);
    Ok(())
}
