//! Given uniform partitions p, q and a doubly stochastic D, builds a mixture
//! of unitary conjugations ρ with Σ (Dβ)_i p_i = ρ(Σ β_j q_j).

use jointmaj::birkhoff::local_form_from_coupling;
use jointmaj::{random, ProjectionPartition};

fn main() -> jointmaj::Result<()> {
    let mut rng = random::generator(8);
    let (m, d) = (3, 6);
    let p = ProjectionPartition::from_basis(&random::unitary(d, &mut rng), random::uniform_groups(d, m, &mut rng))?;
    let q = ProjectionPartition::from_basis(&random::unitary(d, &mut rng), random::uniform_groups(d, m, &mut rng))?;
    let coupling = random::doubly_stochastic(m, &mut rng);
    let beta = [1.0, -2.0, 0.5];

    let lf = local_form_from_coupling(&coupling, &p, &q, &beta)?;
    println!("α = {:?}", lf.alpha);
    println!("{} unitary terms, residual {:.2e}", lf.terms.len(), lf.residual);
    Ok(())
}
