//! Birkhoff decomposition of a doubly stochastic matrix into permutations.

use jointmaj::birkhoff::birkhoff_decompose;
use jointmaj::random;

fn main() -> jointmaj::Result<()> {
    let mut rng = random::generator(5);
    let d = random::doubly_stochastic(6, &mut rng);
    let dec = birkhoff_decompose(&d)?;
    for t in dec.terms.iter().take(5) {
        println!("{:.4} × {:?}", t.eta, t.sigma.images());
    }
    println!("{} terms (at most {}), residual {:.2e}", dec.terms.len(), 5 * 5 + 1, dec.residual(&d));
    Ok(())
}
