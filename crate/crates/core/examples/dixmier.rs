//! Finite Dixmier averages: to the scalar τ(b) and blockwise onto a partition.

use jointmaj::localform::{block_dixmier, dixmier_average};
use jointmaj::{linalg, random, ProjectionPartition};

fn main() -> jointmaj::Result<()> {
    let mut rng = random::generator(2);
    let b = random::hermitian(5, &mut rng);
    let avg = dixmier_average(&b)?;
    let scalar = linalg::identity(5) * linalg::c(b.trace());
    println!("{} terms, ‖avg − τ(b)1‖ = {:.2e}", avg.terms.len(), linalg::op_norm(&(avg.result.matrix() - scalar)));

    let p = ProjectionPartition::from_basis(&random::unitary(5, &mut rng), vec![vec![0, 1], vec![2, 3, 4]])?;
    let blocks = block_dixmier(&b, &p)?;
    let target = p.expectation(b.matrix());
    println!("blockwise: {} factors, error {:.2e}", blocks.factors.len(), linalg::op_norm(&(blocks.result.matrix() - target)));
    Ok(())
}
