//! A transport kernel whose rows are constant on cells of small diameter,
//! and its lift to a doubly stochastic map on matrices.

use jointmaj::maps::MatrixMap;
use jointmaj::speclin::joint_spectral_measure;
use jointmaj::transport::{ds_map_from_kernel, partition_cells, synthesize_kernel_partition};
use jointmaj::{linalg, CommutingFamily};

fn main() -> jointmaj::Result<()> {
    let fam_a = CommutingFamily::from_diagonals(&[vec![-0.5, -0.4, 0.4, 0.5]])?;
    let fam_b = CommutingFamily::from_diagonals(&[vec![-1.0, -1.0, 1.0, 1.0]])?;
    let (mu, nu) = (joint_spectral_measure(&fam_a, 0)?, joint_spectral_measure(&fam_b, 0)?);

    println!("cells at diameter 0.2: {:?}", partition_cells(&mu, 0.2));
    let k = synthesize_kernel_partition(&mu, &nu, 0.2)?;
    println!("kernel rows {:?}", k.k);
    println!("residuals {:?}", k.residuals());

    let t = ds_map_from_kernel(&k, &fam_a, &fam_b, 0)?;
    let image = t.apply(fam_b.member(0).matrix());
    println!("‖T(b) − a‖ = {:.2e}", linalg::op_norm(&(image - fam_a.member(0).matrix())));
    Ok(())
}
