//! Command-line front end: argument parsing, JSON I/O, exit codes and the
//! batch verification campaign. The `jointmaj` binary only forwards to
//! [`main_from`].

mod commands;
mod plot;
mod suite;

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use serde::de::DeserializeOwned;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::tol;

pub use commands::{
    cmd_birkhoff, cmd_check, cmd_dixmier, cmd_kernel, cmd_localform, cmd_pinch, cmd_refine, cmd_spectral, MapSpec,
};
pub use plot::error_curve_svg;
pub use suite::{cmd_equivalence_suite, InjectedPair, SuiteParams, SuiteRecord, SuiteSummary, VerificationReport};

pub const EXIT_OK: i32 = 0;
pub const EXIT_NEGATIVE: i32 = 1;
pub const EXIT_INPUT: i32 = 2;
pub const EXIT_DIVISIBILITY: i32 = 3;

/// Seed, tolerances, dimension cap and output locations shared by every
/// subcommand.
#[derive(Clone, Debug, PartialEq)]
pub struct RunConfig {
    pub seed: u64,
    pub tolerances: tol::Tolerances,
    pub dim_cap: usize,
    pub out: Option<PathBuf>,
    pub svg: Option<PathBuf>,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self { seed: 0, tolerances: tol::Tolerances::default(), dim_cap: tol::DEFAULT_DIM_CAP, out: None, svg: None }
    }
}

impl RunConfig {
    pub fn validate(&self) -> Result<()> {
        let t = &self.tolerances;
        if !(t.lp > 0.0 && t.functional_calculus > 0.0 && t.reconstruction_per_m > 0.0) {
            return Err(Error::invalid("tolerances must be positive"));
        }
        if self.dim_cap < 2 {
            return Err(Error::invalid("dimension cap must be at least 2"));
        }
        Ok(())
    }
}

/// Exit code and JSON body of one subcommand.
#[derive(Clone, Debug, PartialEq)]
pub struct CmdOutput {
    pub code: i32,
    pub body: String,
}

impl CmdOutput {
    pub fn json<T: Serialize>(code: i32, value: &T) -> Result<Self> {
        Ok(Self { code, body: serde_json::to_string_pretty(value)? })
    }
}

#[derive(Parser, Debug)]
#[command(name = "jointmaj", version, about = "Joint majorization of commuting Hermitian families and discrete measures")]
pub struct Cli {
    #[command(flatten)]
    pub global: GlobalArgs,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Args, Debug)]
pub struct GlobalArgs {
    /// Master seed for every random choice.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Phase-1 feasibility tolerance of the kernel LP.
    #[arg(long = "tol-lp", global = true, default_value_t = tol::LP)]
    pub tol_lp: f64,
    /// Largest matrix dimension accepted.
    #[arg(long = "cap-d", global = true, default_value_t = tol::DEFAULT_DIM_CAP)]
    pub cap_d: usize,
    /// Write the JSON body here instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Error-versus-resolution plot for `localform`.
    #[arg(long, global = true)]
    pub svg: Option<PathBuf>,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Decide whether MU is majorized by NU; prints the kernel on success.
    Check { mu: PathBuf, nu: PathBuf },
    /// Kernel assembled from diameter-bounded cells of MU.
    Kernel {
        mu: PathBuf,
        nu: PathBuf,
        #[arg(long, default_value_t = 0.0)]
        diameter: f64,
    },
    /// Birkhoff decomposition of a doubly stochastic matrix.
    Birkhoff { matrix: PathBuf },
    /// Joint diagonalization and joint spectral measure of a family.
    Spectral { family: PathBuf },
    /// Conditional expectation of a family onto a partition.
    Pinch { family: PathBuf, partition: PathBuf },
    /// Dixmier average of a Hermitian matrix, blockwise when a partition is given.
    Dixmier {
        matrix: PathBuf,
        #[arg(long)]
        partition: Option<PathBuf>,
    },
    /// Approximate a doubly stochastic map on a family by unitary mixtures.
    Localform {
        map: PathBuf,
        fam_a: PathBuf,
        fam_b: PathBuf,
        #[arg(long = "r", value_delimiter = ',', default_value = "1,2,4")]
        r: Vec<usize>,
    },
    /// Cross-check the equivalent characterizations on random instances.
    Suite {
        #[arg(long, default_value_t = 200)]
        count: usize,
        #[arg(long, default_value_t = 12)]
        dmax: usize,
        #[arg(long, default_value_t = 3)]
        nmax: usize,
        #[arg(long, default_value_t = 128)]
        battery: usize,
        /// Extra family pairs to verify alongside the random ones.
        #[arg(long)]
        inject: Option<PathBuf>,
        #[arg(long)]
        timings: bool,
    },
    /// Replace atoms of a one-dimensional measure by uniform densities.
    Refine {
        measure: PathBuf,
        #[arg(long)]
        atom: Option<usize>,
        #[arg(long, requires = "beta")]
        alpha: Option<f64>,
        #[arg(long, requires = "alpha")]
        beta: Option<f64>,
    },
}

pub fn read_json<T: DeserializeOwned>(path: &Path) -> Result<T> {
    let text = std::fs::read_to_string(path)?;
    Ok(serde_json::from_str(&text)?)
}

fn exit_code(e: &Error) -> i32 {
    match e {
        Error::NoUniformRefinement(_) => EXIT_DIVISIBILITY,
        _ => EXIT_INPUT,
    }
}

/// Runs one parsed command.
pub fn run(command: &Command, cfg: &RunConfig) -> Result<CmdOutput> {
    cfg.validate()?;
    match command {
        Command::Check { mu, nu } => cmd_check(&read_json(mu)?, &read_json(nu)?, cfg),
        Command::Kernel { mu, nu, diameter } => cmd_kernel(&read_json(mu)?, &read_json(nu)?, *diameter, cfg),
        Command::Birkhoff { matrix } => cmd_birkhoff(&read_json(matrix)?, cfg),
        Command::Spectral { family } => cmd_spectral(&read_json(family)?, cfg),
        Command::Pinch { family, partition } => cmd_pinch(&read_json(family)?, &read_json(partition)?, cfg),
        Command::Dixmier { matrix, partition } => {
            let p = partition.as_deref().map(read_json).transpose()?;
            cmd_dixmier(&read_json(matrix)?, p.as_ref(), cfg)
        }
        Command::Localform { map, fam_a, fam_b, r } => {
            cmd_localform(&read_json(map)?, &read_json(fam_a)?, &read_json(fam_b)?, r, cfg)
        }
        Command::Suite { count, dmax, nmax, battery, inject, timings } => {
            let injected: Vec<InjectedPair> = match inject {
                Some(p) => suite::read_injected(p)?,
                None => Vec::new(),
            };
            let params = SuiteParams { count: *count, dmax: *dmax, nmax: *nmax, battery: *battery, timings: *timings };
            let report = cmd_equivalence_suite(&params, &injected, cfg)?;
            CmdOutput::json(EXIT_OK, &report)
        }
        Command::Refine { measure, atom, alpha, beta } => {
            let target = match (atom, alpha, beta) {
                (i, Some(a), Some(b)) => Some((i.unwrap_or(0), *a, *b)),
                _ => None,
            };
            cmd_refine(&read_json(measure)?, target, cfg)
        }
    }
}

/// Parses `args`, runs the command, writes the body to `--out` or stdout
/// and returns the exit code.
pub fn main_from<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INPUT } else { EXIT_OK };
            let _ = e.print();
            return code;
        }
    };
    let g = &cli.global;
    let cfg = RunConfig {
        seed: g.seed,
        tolerances: tol::Tolerances { lp: g.tol_lp, ..Default::default() },
        dim_cap: g.cap_d,
        out: g.out.clone(),
        svg: g.svg.clone(),
    };
    match run(&cli.command, &cfg) {
        Ok(out) => match emit(&out.body, cfg.out.as_deref()) {
            Ok(()) => out.code,
            Err(e) => {
                eprintln!("error: {e}");
                EXIT_INPUT
            }
        },
        Err(e) => {
            eprintln!("error: {e}");
            exit_code(&e)
        }
    }
}

fn emit(body: &str, out: Option<&Path>) -> Result<()> {
    match out {
        Some(path) => std::fs::write(path, format!("{body}\n"))?,
        None => {
            let mut stdout = std::io::stdout().lock();
            writeln!(stdout, "{body}")?;
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use clap::CommandFactory;

    #[test]
    fn argument_definitions_are_consistent() {
        Cli::command().debug_assert();
    }

    #[test]
    fn global_flags_parse() {
        let cli = Cli::try_parse_from(["jointmaj", "--seed", "9", "--cap-d", "64", "suite", "--count", "3"]).unwrap();
        assert_eq!((cli.global.seed, cli.global.cap_d), (9, 64));
        assert!(matches!(cli.command, Command::Suite { count: 3, .. }));
        assert!(Cli::try_parse_from(["jointmaj", "refine", "m.json", "--alpha", "1"]).is_err());
    }
}
