use serde::{Deserialize, Serialize};

use super::{plot, CmdOutput, RunConfig, EXIT_NEGATIVE, EXIT_OK};
use crate::birkhoff::{birkhoff_decompose, BirkhoffDecomposition, DoublyStochasticMatrix};
use crate::error::{Error, Result};
use crate::linalg;
use crate::localform::{
    block_dixmier, dixmier_average, local_form_approximate, refine_all, refine_atom, HybridMeasure, LocalFormOptions,
    LocalFormReport,
};
use crate::maps::{IdentityMap, MatrixMap, MixedUnitary};
use crate::measures::DiscreteMeasure;
use crate::random;
use crate::speclin::{joint_diagonalize, pinch, CommutingFamily, HermitianMatrix, JointDiagonalization, ProjectionPartition};
use crate::transport::{decide_majorization_with, ds_map_from_kernel, synthesize_kernel_partition, KernelResiduals, TransportKernel};

#[derive(Serialize)]
struct Infeasible {
    feasible: bool,
}

/// Exit 0 with the kernel when `mu ≺ nu`, exit 1 otherwise.
pub fn cmd_check(mu: &DiscreteMeasure, nu: &DiscreteMeasure, cfg: &RunConfig) -> Result<CmdOutput> {
    let decision = decide_majorization_with(mu, nu, cfg.tolerances.lp)?;
    match decision.witness {
        Some(k) if decision.feasible => CmdOutput::json(EXIT_OK, &k),
        _ => CmdOutput::json(EXIT_NEGATIVE, &Infeasible { feasible: false }),
    }
}

#[derive(Serialize)]
struct KernelOut {
    kernel: TransportKernel,
    cell_diameter: f64,
    residuals: KernelResiduals,
}

pub fn cmd_kernel(mu: &DiscreteMeasure, nu: &DiscreteMeasure, diameter: f64, _cfg: &RunConfig) -> Result<CmdOutput> {
    match synthesize_kernel_partition(mu, nu, diameter) {
        Ok(kernel) => {
            let residuals = kernel.residuals();
            CmdOutput::json(EXIT_OK, &KernelOut { kernel, cell_diameter: diameter, residuals })
        }
        Err(Error::NotMajorized) => CmdOutput::json(EXIT_NEGATIVE, &Infeasible { feasible: false }),
        Err(e) => Err(e),
    }
}

#[derive(Serialize)]
struct BirkhoffOut {
    #[serde(flatten)]
    decomposition: BirkhoffDecomposition,
    residual: f64,
}

pub fn cmd_birkhoff(d: &DoublyStochasticMatrix, cfg: &RunConfig) -> Result<CmdOutput> {
    let decomposition = birkhoff_decompose(d)?;
    let residual = decomposition.residual(d);
    let tol = cfg.tolerances.reconstruction_per_m * d.m() as f64;
    if residual > tol {
        return Err(Error::PostCondition { what: "Birkhoff reconstruction", residual, tol });
    }
    CmdOutput::json(EXIT_OK, &BirkhoffOut { decomposition, residual })
}

#[derive(Serialize)]
struct SpectralOut {
    measure: DiscreteMeasure,
    #[serde(flatten)]
    diagonalization: JointDiagonalization,
}

pub fn cmd_spectral(fam: &CommutingFamily, cfg: &RunConfig) -> Result<CmdOutput> {
    fam.check_dim_cap(cfg.dim_cap)?;
    let diagonalization = joint_diagonalize(fam, cfg.seed)?;
    CmdOutput::json(EXIT_OK, &SpectralOut { measure: diagonalization.measure(), diagonalization })
}

pub fn cmd_pinch(fam: &CommutingFamily, part: &ProjectionPartition, cfg: &RunConfig) -> Result<CmdOutput> {
    fam.check_dim_cap(cfg.dim_cap)?;
    CmdOutput::json(EXIT_OK, &pinch(fam, part)?)
}

/// Plain Dixmier average, or the blockwise one when a partition is given.
/// The result is checked against `τ(b) I` or `Σ β_i(b) p_i`.
pub fn cmd_dixmier(b: &HermitianMatrix, part: Option<&ProjectionPartition>, cfg: &RunConfig) -> Result<CmdOutput> {
    if b.dim() > cfg.dim_cap {
        return Err(Error::OutOfRange(format!("dimension {} exceeds cap {}", b.dim(), cfg.dim_cap)));
    }
    let tol = cfg.tolerances.functional_calculus;
    match part {
        None => {
            let out = dixmier_average(b)?;
            let target = linalg::identity(b.dim()) * linalg::c(b.trace());
            let residual = linalg::op_norm(&(out.result.matrix() - target));
            if residual > tol {
                return Err(Error::PostCondition { what: "Dixmier average", residual, tol });
            }
            CmdOutput::json(EXIT_OK, &out)
        }
        Some(p) => {
            let out = block_dixmier(b, p)?;
            let residual = linalg::op_norm(&(out.result.matrix() - p.expectation(b.matrix())));
            if residual > tol {
                return Err(Error::PostCondition { what: "block Dixmier average", residual, tol });
            }
            CmdOutput::json(EXIT_OK, &out)
        }
    }
}

/// The map fed to `localform`.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum MapSpec {
    /// Lift of a kernel between the spectral measures of the two families.
    Kernel(TransportKernel),
    MixedUnitary(MixedUnitary),
    /// Conditional expectation onto a partition.
    Pinching { partition: ProjectionPartition },
    Identity,
}

impl MapSpec {
    pub fn build(&self, fam_a: &CommutingFamily, fam_b: &CommutingFamily, seed: u64) -> Result<Box<dyn MatrixMap>> {
        Ok(match self {
            MapSpec::Kernel(k) => Box::new(ds_map_from_kernel(k, fam_a, fam_b, seed)?),
            MapSpec::MixedUnitary(m) => Box::new(m.clone()),
            MapSpec::Pinching { partition } => Box::new(partition.clone()),
            MapSpec::Identity => Box::new(IdentityMap { d: fam_b.d() }),
        })
    }
}

#[derive(Serialize)]
struct LocalFormOut {
    tool: &'static str,
    version: &'static str,
    generator: &'static str,
    seed: u64,
    reports: Vec<LocalFormReport>,
}

/// One pipeline report per resolution; optionally an SVG of error and
/// bound against `r`.
pub fn cmd_localform(
    map: &MapSpec,
    fam_a: &CommutingFamily,
    fam_b: &CommutingFamily,
    rs: &[usize],
    cfg: &RunConfig,
) -> Result<CmdOutput> {
    if rs.is_empty() {
        return Err(Error::invalid("at least one resolution is required"));
    }
    let t = map.build(fam_a, fam_b, cfg.seed)?;
    let opts = LocalFormOptions {
        seed: cfg.seed,
        dim_cap: cfg.dim_cap,
        functional_calculus: cfg.tolerances.functional_calculus,
        ..Default::default()
    };
    let reports = rs
        .iter()
        .map(|&r| local_form_approximate(t.as_ref(), fam_a, fam_b, r, &opts).map(|(_, rep)| rep))
        .collect::<Result<Vec<_>>>()?;
    if let Some(path) = &cfg.svg {
        let errors: Vec<f64> = reports.iter().map(|r| r.errors_per_member.iter().copied().fold(0.0, f64::max)).collect();
        let bounds: Vec<f64> = reports.iter().map(|r| r.bound).collect();
        std::fs::write(path, plot::error_curve_svg(rs, &errors, &bounds))?;
    }
    let out = LocalFormOut {
        tool: env!("CARGO_PKG_NAME"),
        version: env!("CARGO_PKG_VERSION"),
        generator: random::GENERATOR_NAME,
        seed: cfg.seed,
        reports,
    };
    CmdOutput::json(EXIT_OK, &out)
}

/// Refines one atom onto `[α, β]`, or every atom onto the disjoint schedule.
pub fn cmd_refine(mu: &DiscreteMeasure, target: Option<(usize, f64, f64)>, _cfg: &RunConfig) -> Result<CmdOutput> {
    let h = HybridMeasure::from_discrete(mu)?;
    let out = match target {
        Some((i, a, b)) => refine_atom(&h, i, a, b)?,
        None => refine_all(&h)?,
    };
    CmdOutput::json(EXIT_OK, &out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn line(v: &[(f64, f64)]) -> DiscreteMeasure {
        DiscreteMeasure::on_line(v).unwrap()
    }

    #[test]
    fn check_exit_codes() {
        let cfg = RunConfig::default();
        let two = line(&[(0.0, 0.5), (2.0, 0.5)]);
        assert_eq!(cmd_check(&two, &two, &cfg).unwrap().code, EXIT_OK);
        let out = cmd_check(&line(&[(1.0, 1.0)]), &two, &cfg).unwrap();
        assert_eq!(out.code, EXIT_OK);
        let k: TransportKernel = serde_json::from_str(&out.body).unwrap();
        assert!((k.k[0][0] - 0.5).abs() < 1e-12);
        let spread = line(&[(-2.0, 0.5), (2.0, 0.5)]);
        let tight = line(&[(-1.0, 0.5), (1.0, 0.5)]);
        assert_eq!(cmd_check(&spread, &tight, &cfg).unwrap().code, EXIT_NEGATIVE);
    }

    #[test]
    fn map_spec_json() {
        let s: MapSpec = serde_json::from_str(r#"{"kind":"identity"}"#).unwrap();
        assert!(matches!(s, MapSpec::Identity));
        let s: MapSpec = serde_json::from_str(
            r#"{"kind":"mixed_unitary","terms":[{"weight":1.0,"unitary":{"d":2,"re":[[0,1],[1,0]]}}]}"#,
        )
        .unwrap();
        assert!(matches!(s, MapSpec::MixedUnitary(ref m) if m.len() == 1));
        let s: MapSpec = serde_json::from_str(
            r#"{"kind":"kernel","mu":{"dim":1,"atoms":[{"point":[1],"mass":1}]},
                "nu":{"dim":1,"atoms":[{"point":[0],"mass":0.5},{"point":[2],"mass":0.5}]},"K":[[0.5,0.5]]}"#,
        )
        .unwrap();
        assert!(matches!(s, MapSpec::Kernel(_)));
        let s: MapSpec = serde_json::from_str(r#"{"kind":"pinching","partition":{"d":2,"groups":[[0,1]]}}"#).unwrap();
        assert!(matches!(s, MapSpec::Pinching { .. }));
    }

    #[test]
    fn dixmier_checks_result() {
        let b = HermitianMatrix::from_real_diag(&[1.0, 2.0, 3.0, 4.0]).unwrap();
        let cfg = RunConfig::default();
        assert_eq!(cmd_dixmier(&b, None, &cfg).unwrap().code, EXIT_OK);
        let p = ProjectionPartition::coordinate(4, vec![vec![0, 1], vec![2, 3]]).unwrap();
        let out = cmd_dixmier(&b, Some(&p), &cfg).unwrap();
        assert!(out.body.contains("factors"));
    }
}
