//! The eight acceptance criteria, one pass/fail line each. Runs as a plain
//! binary: `cargo test -p jointmaj --test acceptance`.

use std::time::{Duration, Instant};

use jointmaj::birkhoff::{birkhoff_decompose, local_form_from_coupling};
use jointmaj::cli::{cmd_equivalence_suite, RunConfig, SuiteParams};
use jointmaj::linalg;
use jointmaj::localform::{averaging_map, block_dixmier, build_partition_scheme, dixmier_average, local_form_approximate};
use jointmaj::measures::DiscreteMeasure;
use jointmaj::random::{self, Generator};
use jointmaj::speclin::{approx_unitarily_equivalent, joint_spectral_measure, pinch};
use jointmaj::transport::{decide_majorization, ds_map_from_kernel, TransportKernel};
use jointmaj::{CommutingFamily, HermitianMatrix, PiecewiseUniformMeasure, ProjectionPartition};
use rand::Rng;

struct Outcome {
    pass: bool,
    detail: String,
}

type Criterion = (&'static str, fn() -> Outcome);

fn outcome(pass: bool, detail: String) -> Outcome {
    Outcome { pass, detail }
}

fn random_partition(d: usize, rng: &mut Generator) -> ProjectionPartition {
    let divisors: Vec<usize> = (1..=d).filter(|m| d.is_multiple_of(*m)).collect();
    let m = divisors[rng.random_range(0..divisors.len())];
    let groups = random::uniform_groups(d, m, rng);
    ProjectionPartition::from_basis(&random::unitary(d, rng), groups).unwrap()
}

fn equivalence_suite() -> Outcome {
    let start = Instant::now();
    let params = SuiteParams { count: 200, dmax: 12, nmax: 3, battery: 128, timings: false };
    let rep = cmd_equivalence_suite(&params, &[], &RunConfig { seed: 7, ..Default::default() }).unwrap();
    let elapsed = start.elapsed();
    let feasible: Vec<_> = rep.records.iter().filter(|r| r.lp_feasible).collect();
    let lift_ok = feasible.iter().all(|r| r.ds_round_trip.is_some_and(|g| g <= 1e-7));
    let battery_ok = feasible.iter().all(|r| r.battery_passed);
    let potential_ok = rep.records.iter().filter(|r| r.n == 1).all(|r| r.potential == Some(r.lp_feasible));
    let worst = feasible.iter().filter_map(|r| r.ds_round_trip).fold(0.0, f64::max);
    outcome(
        lift_ok && battery_ok && potential_ok && rep.summary.disagreements == 0 && elapsed <= Duration::from_secs(60),
        format!(
            "{} instances, {} feasible, {} with n = 1, {} disagreements, worst lift gap {worst:.1e}, {:.2?}",
            rep.summary.instances,
            feasible.len(),
            rep.summary.one_dimensional,
            rep.summary.disagreements,
            elapsed
        ),
    )
}

fn birkhoff() -> Outcome {
    let mut rng = random::generator(2);
    let inputs: Vec<_> = (0..100)
        .map(|_| {
            let m = rng.random_range(2..=50);
            random::doubly_stochastic(m, &mut rng)
        })
        .collect();
    let start = Instant::now();
    let decs: Vec<_> = inputs.iter().map(|d| birkhoff_decompose(d).unwrap()).collect();
    let elapsed = start.elapsed();
    let mut pass = elapsed <= Duration::from_secs(5);
    let mut worst: f64 = 0.0;
    for (d, dec) in inputs.iter().zip(&decs) {
        let m = d.m();
        let res = dec.residual(d);
        worst = worst.max(res / m as f64);
        pass &= res <= 1e-10 * m as f64 && dec.terms.len() <= (m - 1) * (m - 1) + 1;
    }
    outcome(pass, format!("100 matrices, worst residual/m {worst:.1e}, {elapsed:.2?}"))
}

fn local_form_identity() -> Outcome {
    let mut rng = random::generator(3);
    let mut pass = true;
    let mut worst: f64 = 0.0;
    for _ in 0..50 {
        let m = rng.random_range(2..=10);
        let s = rng.random_range(1..=40 / m);
        let d = m * s;
        let p = ProjectionPartition::from_basis(&random::unitary(d, &mut rng), random::uniform_groups(d, m, &mut rng)).unwrap();
        let q = ProjectionPartition::from_basis(&random::unitary(d, &mut rng), random::uniform_groups(d, m, &mut rng)).unwrap();
        let dm = random::doubly_stochastic(m, &mut rng);
        let beta: Vec<f64> = (0..m).map(|_| rng.random_range(-3.0..3.0)).collect();
        let bmax = beta.iter().fold(0.0_f64, |a, b| a.max(b.abs()));
        match local_form_from_coupling(&dm, &p, &q, &beta) {
            Ok(lf) => {
                worst = worst.max(lf.residual / (1.0 + bmax));
                pass &= lf.residual <= 1e-9 * (1.0 + bmax);
            }
            Err(_) => pass = false,
        }
    }
    outcome(pass, format!("50 instances, worst residual/(1+max|β|) {worst:.1e}"))
}

fn pinching() -> Outcome {
    let mut rng = random::generator(4);
    let mut feasible = 0;
    for _ in 0..100 {
        let d = rng.random_range(2..=12);
        let n = rng.random_range(1..=3);
        let fam = random::commuting_family(d, n, &mut rng);
        let part = random_partition(d, &mut rng);
        let pinched = pinch(&fam, &part).unwrap();
        let (mu, nu) = (joint_spectral_measure(&pinched, 0).unwrap(), joint_spectral_measure(&fam, 0).unwrap());
        feasible += usize::from(decide_majorization(&mu, &nu).unwrap().feasible);
    }
    outcome(feasible == 100, format!("{feasible}/100 pinched families majorized by the original"))
}

fn dixmier() -> Outcome {
    let mut rng = random::generator(5);
    let (mut plain, mut block): (f64, f64) = (0.0, 0.0);
    for _ in 0..100 {
        let d = rng.random_range(1..=32);
        let b = random::hermitian(d, &mut rng);
        let out = dixmier_average(&b).unwrap();
        let target = linalg::identity(d) * linalg::c(b.trace());
        plain = plain.max(linalg::op_norm(&(out.result.matrix() - target)));
        let sizes = rng.random_range(1..=d);
        let mut idx: Vec<usize> = (0..d).collect();
        rand::seq::SliceRandom::shuffle(&mut idx[..], &mut rng);
        let mut groups: Vec<Vec<usize>> = vec![Vec::new(); sizes];
        for (i, c) in idx.into_iter().enumerate() {
            groups[i % sizes].push(c);
        }
        let p = ProjectionPartition::from_basis(&random::unitary(d, &mut rng), groups).unwrap();
        let out = block_dixmier(&b, &p).unwrap();
        block = block.max(linalg::op_norm(&(out.result.matrix() - p.expectation(b.matrix()))));
    }
    outcome(plain <= 1e-7 && block <= 1e-7, format!("max error {plain:.1e} plain, {block:.1e} blockwise"))
}

/// Piecewise-linear `f` on `[0, 1]` with largest slope magnitude `lip`.
fn random_pl(rng: &mut Generator, lip: f64) -> (Vec<f64>, Vec<f64>) {
    let pieces = rng.random_range(1..=6);
    let mut xs: Vec<f64> = (0..pieces - 1).map(|_| rng.random::<f64>()).collect();
    xs.push(0.0);
    xs.push(1.0);
    xs.sort_by(f64::total_cmp);
    let steep = rng.random_range(0..pieces);
    let mut ys = vec![rng.random_range(-1.0..1.0)];
    for i in 0..pieces {
        let slope = if i == steep { lip * if rng.random::<bool>() { 1.0 } else { -1.0 } } else { rng.random_range(-lip..=lip) };
        ys.push(ys[i] + slope * (xs[i + 1] - xs[i]));
    }
    (xs, ys)
}

fn averaging_bound() -> Outcome {
    let mut rng = random::generator(6);
    let mu = PiecewiseUniformMeasure::uniform(0.0, 1.0).unwrap();
    let schemes: Vec<_> = [2, 4, 8].iter().map(|&r| build_partition_scheme(&mu, r).unwrap()).collect();
    let mut pass = true;
    let mut worst_ratio: f64 = 0.0;
    for _ in 0..50 {
        let lip = rng.random_range(0.1..=10.0);
        let (xs, ys) = random_pl(&mut rng, lip);
        let f = |x: f64| {
            let i = xs.partition_point(|b| *b <= x).clamp(1, xs.len() - 1);
            ys[i - 1] + (ys[i] - ys[i - 1]) * (x - xs[i - 1]) / (xs[i] - xs[i - 1])
        };
        let sup = ys.iter().fold(0.0_f64, |a, y| a.max(y.abs()));
        let errors: Vec<f64> = schemes.iter().map(|s| averaging_map(s, &f, true).sup_error(&f, &xs, 8)).collect();
        for (s, e) in schemes.iter().zip(&errors) {
            let bound = lip / s.r as f64 + 2.0 * sup / s.k as f64;
            worst_ratio = worst_ratio.max(e / bound);
            pass &= *e <= bound;
        }
        if lip >= 1.0 {
            pass &= errors[2] < errors[0];
        }
    }
    outcome(pass, format!("50 functions at r = 2, 4, 8, worst error/bound {worst_ratio:.3}"))
}

fn unitary_equivalence() -> Outcome {
    let mut rng = random::generator(7);
    let (mut yes, mut no) = (0, 0);
    let mut worst: f64 = 0.0;
    for _ in 0..100 {
        let d = rng.random_range(2..=12);
        let n = rng.random_range(1..=3);
        let fam = random::commuting_family(d, n, &mut rng);
        let w = random::unitary(d, &mut rng);
        let conj = fam.conjugate(&w.adjoint());
        let v = approx_unitarily_equivalent(&conj, &fam, 0).unwrap();
        if let (true, Some(wt)) = (v.equivalent, v.witness) {
            let res = conj
                .members()
                .iter()
                .zip(fam.members())
                .map(|(a, b)| linalg::op_norm(&(wt.adjoint() * b.matrix() * &wt - a.matrix())))
                .fold(0.0, f64::max);
            worst = worst.max(res);
            yes += usize::from(res <= 1e-6);
        }
    }
    for _ in 0..100 {
        let d = rng.random_range(2..=12);
        let n = rng.random_range(1..=3);
        let mut tuples = random::tuples(d, n, &mut rng);
        let u = random::unitary(d, &mut rng);
        let fam = random::family_from_tuples(&tuples, &u);
        let c = rng.random_range(0..d);
        let i = rng.random_range(0..n);
        tuples[c][i] += rng.random_range(1e-3..1e-1) * if rng.random::<bool>() { 1.0 } else { -1.0 };
        let perturbed = random::family_from_tuples(&tuples, &random::unitary(d, &mut rng));
        no += usize::from(!approx_unitarily_equivalent(&perturbed, &fam, 0).unwrap().equivalent);
    }
    outcome(yes == 100 && no == 100, format!("{yes}/100 conjugates recognized (worst {worst:.1e}), {no}/100 perturbed rejected"))
}

fn end_to_end() -> Outcome {
    let fam_b = CommutingFamily::new(vec![HermitianMatrix::from_real_diag(&[0.0, 0.0, 0.0, 0.0, 1.0, 1.0, 1.0, 1.0]).unwrap()]).unwrap();
    let fam_a =
        CommutingFamily::new(vec![HermitianMatrix::from_real_diag(&[0.25, 0.25, 0.25, 0.25, 0.75, 0.75, 0.75, 0.75]).unwrap()])
            .unwrap();
    let mu = DiscreteMeasure::on_line(&[(0.25, 0.5), (0.75, 0.5)]).unwrap();
    let nu = DiscreteMeasure::on_line(&[(0.0, 0.5), (1.0, 0.5)]).unwrap();
    let kernel = TransportKernel::new(mu, nu, vec![vec![0.75, 0.25], vec![0.25, 0.75]]).unwrap();
    let t = ds_map_from_kernel(&kernel, &fam_a, &fam_b, 0).unwrap();
    let mut pass = true;
    let mut parts = Vec::new();
    for r in [1, 2, 4] {
        let (_, rep) = local_form_approximate(&t, &fam_a, &fam_b, r, &Default::default()).unwrap();
        let bound = 3.0 / r as f64 * (1.0 + fam_b.max_norm());
        let e = rep.errors_per_member.iter().copied().fold(0.0, f64::max);
        pass &= e <= bound;
        parts.push(format!("r={r}: {e:.1e} <= {bound:.2}"));
    }
    outcome(pass, parts.join(", "))
}

fn main() {
    let criteria: [Criterion; 8] = [
        ("equivalence suite", equivalence_suite),
        ("Birkhoff decomposition", birkhoff),
        ("local-form identity", local_form_identity),
        ("pinching is majorized", pinching),
        ("Dixmier averages", dixmier),
        ("averaging bound", averaging_bound),
        ("approximate unitary equivalence", unitary_equivalence),
        ("end-to-end local form", end_to_end),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let o = run();
        println!("[{}] {} {name}: {}", if o.pass { "PASS" } else { "FAIL" }, i + 1, o.detail);
        failed += usize::from(!o.pass);
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
