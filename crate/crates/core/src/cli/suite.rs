use std::path::Path;
use std::time::Instant;

use rand::Rng;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use super::{read_json, RunConfig};
use crate::error::{Error, Result};
use crate::linalg;
use crate::maps::MatrixMap;
use crate::random;
use crate::speclin::{joint_spectral_measure, pinch, CommutingFamily, HermitianMatrix, ProjectionPartition};
use crate::transport::{convex_battery_measures, decide_majorization_with, ds_map_from_kernel, potential_oracle_1d};

/// Largest allowed `‖T(b_i) − a_i‖` for the lifted kernel.
const ROUND_TRIP_TOL: f64 = 1e-7;

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct SuiteParams {
    pub count: usize,
    pub dmax: usize,
    pub nmax: usize,
    pub battery: usize,
    #[serde(skip)]
    pub timings: bool,
}

impl Default for SuiteParams {
    fn default() -> Self {
        Self { count: 200, dmax: 12, nmax: 3, battery: 128, timings: false }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct InjectedPair {
    #[serde(default)]
    pub label: Option<String>,
    pub fam_a: CommutingFamily,
    pub fam_b: CommutingFamily,
}

#[derive(Deserialize)]
#[serde(untagged)]
enum InjectFile {
    Many(Vec<InjectedPair>),
    One(InjectedPair),
}

pub(super) fn read_injected(path: &Path) -> Result<Vec<InjectedPair>> {
    Ok(match read_json::<InjectFile>(path)? {
        InjectFile::Many(v) => v,
        InjectFile::One(p) => vec![p],
    })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SuiteRecord {
    pub digest: String,
    pub kind: String,
    pub d: usize,
    pub n: usize,
    pub lp_feasible: bool,
    pub battery_passed: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub potential: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub ds_round_trip: Option<f64>,
    /// False only when two oracles contradict each other.
    pub agreement: bool,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub disagreements: Vec<String>,
    /// The LP refutes majorization but no battery function does.
    pub battery_incomplete: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub elapsed_ms: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub fam_a: Option<CommutingFamily>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub fam_b: Option<CommutingFamily>,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct SuiteSummary {
    pub instances: usize,
    pub feasible: usize,
    pub infeasible: usize,
    pub one_dimensional: usize,
    pub disagreements: usize,
    pub battery_incomplete: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct VerificationReport {
    pub tool: String,
    pub version: String,
    pub generator: String,
    pub seed: u64,
    pub params: SuiteParams,
    pub summary: SuiteSummary,
    pub records: Vec<SuiteRecord>,
}

fn digest(fam_a: &CommutingFamily, fam_b: &CommutingFamily) -> Result<String> {
    let bytes = serde_json::to_vec(&(fam_a, fam_b))?;
    Ok(hex::encode(Sha256::digest(&bytes)))
}

/// `a_i − τ(a_i) + τ(b_i)`, so both families share their trace vector.
fn recenter(fam_a: &CommutingFamily, fam_b: &CommutingFamily) -> Result<CommutingFamily> {
    let members = fam_a
        .members()
        .iter()
        .zip(fam_b.members())
        .map(|(a, b)| {
            let shift = b.trace() - a.trace();
            HermitianMatrix::new(a.matrix() + linalg::identity(a.dim()) * linalg::c(shift))
        })
        .collect::<Result<Vec<_>>>()?;
    CommutingFamily::new(members)
}

fn instance(kind: usize, rng: &mut random::Generator, dmax: usize, nmax: usize) -> Result<(&'static str, CommutingFamily, CommutingFamily)> {
    let d = rng.random_range(2..=dmax.max(2));
    let n = rng.random_range(1..=nmax.max(1));
    let fam_b = random::commuting_family(d, n, rng);
    Ok(match kind {
        0 => {
            let divisors: Vec<usize> = (1..=d).filter(|m| d % m == 0).collect();
            let m = divisors[rng.random_range(0..divisors.len())];
            let groups = random::uniform_groups(d, m, rng);
            let part = ProjectionPartition::from_basis(&random::unitary(d, rng), groups)?;
            ("pinched", pinch(&fam_b, &part)?, fam_b)
        }
        1 => {
            let other = random::commuting_family(d, n, rng);
            ("recentered_independent", recenter(&other, &fam_b)?, fam_b)
        }
        _ => {
            let w = random::unitary(d, rng);
            ("conjugated", fam_b.conjugate(&w), fam_b)
        }
    })
}

fn verify(
    kind: &str,
    fam_a: &CommutingFamily,
    fam_b: &CommutingFamily,
    seed: u64,
    params: &SuiteParams,
    cfg: &RunConfig,
) -> Result<SuiteRecord> {
    let start = Instant::now();
    if fam_a.n() != fam_b.n() || fam_a.d() != fam_b.d() {
        return Err(Error::DimensionMismatch { expected: fam_b.d(), got: fam_a.d() });
    }
    fam_b.check_dim_cap(cfg.dim_cap)?;
    let mu = joint_spectral_measure(fam_a, seed)?;
    let nu = joint_spectral_measure(fam_b, seed)?;
    let decision = decide_majorization_with(&mu, &nu, cfg.tolerances.lp)?;
    let battery = convex_battery_measures(&mu, &nu, params.battery, seed)?;
    let potential = if fam_b.n() == 1 { Some(potential_oracle_1d(&mu, &nu)?) } else { None };

    let mut disagreements = Vec::new();
    let mut ds_round_trip = None;
    if let (true, Some(k)) = (decision.feasible, &decision.witness) {
        let t = ds_map_from_kernel(k, fam_a, fam_b, seed)?;
        let gap = fam_b
            .members()
            .iter()
            .zip(fam_a.members())
            .map(|(b, a)| linalg::op_norm(&(t.apply(b.matrix()) - a.matrix())))
            .fold(0.0, f64::max);
        ds_round_trip = Some(gap);
        if !(gap <= ROUND_TRIP_TOL) {
            disagreements.push(format!("kernel lift misses the target family by {gap:e}"));
        }
        if !battery.passed {
            disagreements.push("LP feasible but a convex function separates the measures".into());
        }
    }
    if let Some(p) = potential {
        if p != decision.feasible {
            disagreements.push(format!("LP says {} but the potential oracle says {p}", decision.feasible));
        }
    }
    let agreement = disagreements.is_empty();
    let battery_incomplete = !decision.feasible && battery.passed;
    let keep = !agreement || battery_incomplete;
    Ok(SuiteRecord {
        digest: digest(fam_a, fam_b)?,
        kind: kind.to_string(),
        d: fam_b.d(),
        n: fam_b.n(),
        lp_feasible: decision.feasible,
        battery_passed: battery.passed,
        potential,
        ds_round_trip,
        agreement,
        disagreements,
        battery_incomplete,
        elapsed_ms: params.timings.then(|| start.elapsed().as_secs_f64() * 1e3),
        fam_a: keep.then(|| fam_a.clone()),
        fam_b: keep.then(|| fam_b.clone()),
    })
}

/// Runs `count` random instances plus the injected pairs through the LP,
/// the convex-function battery, the one-dimensional potential oracle and
/// the kernel lift, and reports every contradiction.
pub fn cmd_equivalence_suite(params: &SuiteParams, injected: &[InjectedPair], cfg: &RunConfig) -> Result<VerificationReport> {
    if params.count > 0 && (params.dmax < 2 || params.nmax < 1) {
        return Err(Error::invalid("dmax must be at least 2 and nmax at least 1"));
    }
    let mut master = random::generator(cfg.seed);
    let mut records = Vec::with_capacity(params.count + injected.len());
    for i in 0..params.count {
        let inst_seed: u64 = master.random();
        let mut rng = random::generator(inst_seed);
        let (kind, fam_a, fam_b) = instance(i % 3, &mut rng, params.dmax, params.nmax)?;
        records.push(verify(kind, &fam_a, &fam_b, inst_seed, params, cfg)?);
    }
    for p in injected {
        let kind = p.label.clone().unwrap_or_else(|| "injected".into());
        records.push(verify(&kind, &p.fam_a, &p.fam_b, cfg.seed, params, cfg)?);
    }
    records.sort_by(|a, b| a.digest.cmp(&b.digest));

    let summary = SuiteSummary {
        instances: records.len(),
        feasible: records.iter().filter(|r| r.lp_feasible).count(),
        infeasible: records.iter().filter(|r| !r.lp_feasible).count(),
        one_dimensional: records.iter().filter(|r| r.n == 1).count(),
        disagreements: records.iter().filter(|r| !r.agreement).count(),
        battery_incomplete: records.iter().filter(|r| r.battery_incomplete).count(),
    };
    Ok(VerificationReport {
        tool: env!("CARGO_PKG_NAME").into(),
        version: env!("CARGO_PKG_VERSION").into(),
        generator: random::GENERATOR_NAME.into(),
        seed: cfg.seed,
        params: *params,
        summary,
        records,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_suite() {
        let params = SuiteParams { count: 0, ..Default::default() };
        let rep = cmd_equivalence_suite(&params, &[], &RunConfig::default()).unwrap();
        assert!(rep.records.is_empty());
        assert_eq!(rep.summary, SuiteSummary::default());
    }

    #[test]
    fn small_suite_agrees_and_is_sorted() {
        let params = SuiteParams { count: 12, dmax: 6, nmax: 2, ..Default::default() };
        let rep = cmd_equivalence_suite(&params, &[], &RunConfig { seed: 3, ..Default::default() }).unwrap();
        assert_eq!(rep.summary.instances, 12);
        assert_eq!(rep.summary.disagreements, 0, "{:#?}", rep.records);
        assert!(rep.records.windows(2).all(|w| w[0].digest <= w[1].digest));
        assert!(rep.records.iter().filter(|r| r.kind != "recentered_independent").all(|r| r.lp_feasible));
    }
}
