//! The batch campaign cross-checking the LP, the lift to a doubly stochastic
//! map, the convex battery and the one-dimensional potential test.

use jointmaj::cli::{cmd_equivalence_suite, RunConfig, SuiteParams};

fn main() -> jointmaj::Result<()> {
    let params = SuiteParams { count: 60, dmax: 8, ..Default::default() };
    let report = cmd_equivalence_suite(&params, &[], &RunConfig { seed: 7, ..Default::default() })?;
    println!("{}", serde_json::to_string_pretty(&report.summary).expect("summary serializes"));
    for r in report.records.iter().take(3) {
        println!("{} {:<24} d={} n={} feasible={}", &r.digest[..12], r.kind, r.d, r.n, r.lp_feasible);
    }
    Ok(())
}
