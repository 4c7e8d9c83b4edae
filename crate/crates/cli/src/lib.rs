//! Command-line front end for `lattice-wigner`: reads JSON state specs and
//! writes Wigner grids, negativity reports, marginals, reconstructions,
//! parameter sweeps and identity checks as CSV or JSON.

pub mod commands;
pub mod error;
pub mod grid_io;
pub mod spec;
pub mod sweep;

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

pub use error::{CliError, Result};
pub use grid_io::{Format, RunConfig};

#[derive(Debug, Parser)]
#[command(name = "lwig", version, about = "Wigner functions of lattice states")]
pub struct Cli {
    #[command(flatten)]
    pub opts: GlobalOpts,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Args)]
pub struct GlobalOpts {
    /// Number of k nodes; must be even and at least the Nyquist bound.
    #[arg(long = "nk", global = true, default_value_t = lattice_wigner::DEFAULT_NK)]
    pub n_k: usize,
    /// Output format (default: csv for tables, json for reports).
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,
    /// Output file; written atomically. Defaults to stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Tolerance used by `check`.
    #[arg(long, global = true, default_value_t = 1e-10)]
    pub tol: f64,
    /// Relative amplitude at which Gaussian tails are cut.
    #[arg(long = "tail-eps", global = true, default_value_t = lattice_wigner::DEFAULT_TAIL_EPS)]
    pub tail_eps: f64,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Sample W(m, k) on the full grid.
    Wigner {
        #[arg(long)]
        spec: PathBuf,
    },
    /// Sign-filtered negative volume and related diagnostics.
    Eta {
        #[arg(long)]
        spec: PathBuf,
    },
    /// Position and momentum marginals next to their direct values.
    Marginals {
        #[arg(long)]
        spec: PathBuf,
    },
    /// Recover the density matrix from a state's grid or a grid file.
    Reconstruct {
        #[arg(long, conflicts_with = "grid", required_unless_present = "grid")]
        spec: Option<PathBuf>,
        #[arg(long)]
        grid: Option<PathBuf>,
    },
    /// Negativity over a grid of template parameters.
    Sweep {
        /// Template spec; the first two terms are moved by `--n0`.
        #[arg(long)]
        spec: PathBuf,
        /// `a:b[:step]`: first term at +n0, second at -n0.
        #[arg(long)]
        n0: Option<sweep::IntAxis>,
        /// `a:b:count`: momentum of the last term.
        #[arg(long)]
        q0a: Option<sweep::RealAxis>,
        /// `a:b:count`: width of every Gaussian term.
        #[arg(long)]
        sigma: Option<sweep::RealAxis>,
    },
    /// Verify the phase-space identities; exits with 1 on any failure.
    Check {
        #[arg(long, conflicts_with = "grid", required_unless_present = "grid")]
        spec: Option<PathBuf>,
        #[arg(long)]
        grid: Option<PathBuf>,
    },
}

impl GlobalOpts {
    pub fn config(&self, default_format: Format) -> Result<RunConfig> {
        if !(self.tol > 0.0 && self.tol.is_finite()) {
            return Err(CliError::Invalid(format!("--tol must be positive, got {}", self.tol)));
        }
        Ok(RunConfig {
            n_k: self.n_k,
            tail_eps: self.tail_eps,
            tol: self.tol,
            output_format: self.format.unwrap_or(default_format),
        })
    }
}

/// Cap the worker pool from `LW_THREADS`, if set.
pub fn init_threads() -> Result<()> {
    let Ok(raw) = std::env::var("LW_THREADS") else {
        return Ok(());
    };
    let n: usize = raw
        .trim()
        .parse()
        .ok()
        .filter(|&n| n > 0)
        .ok_or_else(|| CliError::Invalid(format!("LW_THREADS must be a positive integer, got `{raw}`")))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| CliError::Invalid(format!("LW_THREADS: {e}")))
}

/// Execute a parsed command line.
pub fn run(cli: &Cli) -> Result<()> {
    commands::dispatch(&cli.opts, &cli.command)
}
