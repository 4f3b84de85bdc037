//! Approximating a doubly stochastic map on a family by convex combinations
//! of unitary conjugations at increasing resolution.

use jointmaj::localform::{local_form_approximate, LocalFormOptions};
use jointmaj::speclin::joint_spectral_measure;
use jointmaj::transport::{decide_majorization, ds_map_from_kernel};
use jointmaj::{random, CommutingFamily};

fn main() -> jointmaj::Result<()> {
    let fam_b = CommutingFamily::from_diagonals(&[vec![-1.0, -1.0, -1.0, 0.0, 0.0, 0.0, 1.0, 1.0, 1.0]])?;
    let pinched = vec![-2.0 / 3.0, -2.0 / 3.0, -2.0 / 3.0, 0.0, 0.0, 0.0, 2.0 / 3.0, 2.0 / 3.0, 2.0 / 3.0];
    let mut rng = random::generator(1);
    let fam_a = CommutingFamily::from_diagonals(&[pinched])?.conjugate(&random::unitary(9, &mut rng));

    let (mu, nu) = (joint_spectral_measure(&fam_a, 0)?, joint_spectral_measure(&fam_b, 0)?);
    let kernel = decide_majorization(&mu, &nu)?.witness.expect("majorized");
    let t = ds_map_from_kernel(&kernel, &fam_a, &fam_b, 0)?;
    for r in [1, 2, 4, 8] {
        let (channel, rep) = local_form_approximate(&t, &fam_a, &fam_b, r, &LocalFormOptions::default())?;
        println!(
            "r = {r}: m = {}, {} pairs, {} terms, error {:.2e} (bound {:.2})",
            rep.m,
            rep.pairs,
            channel.term_count(),
            rep.errors_per_member[0],
            rep.bound
        );
    }
    Ok(())
}
