//! The command-line surface: subcommands, flags, and the `lo:hi:n` grid
//! axis syntax.

use std::path::PathBuf;
use std::str::FromStr;

use clap::{Args, Parser, Subcommand, ValueEnum};

/// Build, simulate, and analyze layered leader/member consensus networks.
#[derive(Debug, Parser)]
#[command(name = "hiercon", version, about, color = clap::ColorChoice::Never)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Print the row-stochastic coupling matrix of a hierarchy.
    Build(BuildArgs),
    /// Integrate the consensus dynamics and print the trajectory.
    Simulate(SimulateArgs),
    /// Print the eigenvalue spectrum of the coupling matrix.
    Spectrum(SpectrumArgs),
    /// Print the exponential decay rate toward the limit state.
    Rate(RateArgs),
    /// Evaluate rates or rate regimes over a grid of coupling weights.
    Sweep(SweepArgs),
    /// Check structural and spectral invariants of one configuration.
    Verify(VerifyArgs),
}

/// Network shape and coupling weights, shared by most subcommands.
#[derive(Debug, Args)]
pub struct NetArgs {
    /// Number of layers (at least 2).
    #[arg(long)]
    pub layers: u32,
    /// Members per unit (at least 2); each unit also has one leader.
    #[arg(long)]
    pub breadth: u32,
    /// Coupling weight on the leaders' upward edges.
    #[arg(long)]
    pub alpha: f64,
    /// Coupling weight on the members' downward edges.
    #[arg(long)]
    pub beta: f64,
}

/// Serialization format for machine-readable output. Each subcommand
/// documents which formats it supports; its default is applied when the
/// flag is absent.
#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum OutFormat {
    Csv,
    Json,
}

#[derive(Debug, Args)]
pub struct BuildArgs {
    #[command(flatten)]
    pub net: NetArgs,
    /// Output format: csv (default) or json.
    #[arg(long, value_enum)]
    pub format: Option<OutFormat>,
    /// Write the output to this file instead of stdout.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct SimulateArgs {
    #[command(flatten)]
    pub net: NetArgs,
    /// 1-based flat index of the node that receives a constant input.
    #[arg(long)]
    pub gamma_node: Option<usize>,
    /// Input intensity at the input node (default 1; needs --gamma-node).
    #[arg(long)]
    pub gamma: Option<f64>,
    /// Constant input value (default 1; needs --gamma-node).
    #[arg(long)]
    pub input_value: Option<f64>,
    /// Integration step.
    #[arg(long, default_value_t = 0.01)]
    pub dt: f64,
    /// Integration horizon.
    #[arg(long, default_value_t = 200.0)]
    pub t_end: f64,
    /// Record every k-th step (the initial and final states always are).
    #[arg(long, default_value_t = 10)]
    pub record_every: usize,
    /// Seed for the uniform [0,1) initial state.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Read the initial state from this file (one number per line,
    /// blank lines ignored) instead of seeding it.
    #[arg(long)]
    pub x0_file: Option<PathBuf>,
    /// Output format: only csv is supported for trajectories.
    #[arg(long, value_enum)]
    pub format: Option<OutFormat>,
    /// Write the output to this file instead of stdout.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct SpectrumArgs {
    #[command(flatten)]
    pub net: NetArgs,
    /// Use the two-layer closed forms (rejects deeper networks).
    #[arg(long, conflicts_with = "numeric")]
    pub analytic: bool,
    /// Use the dense iterative eigensolver (the default; works at any depth).
    #[arg(long)]
    pub numeric: bool,
    /// Output format: only json is supported for spectra.
    #[arg(long, value_enum)]
    pub format: Option<OutFormat>,
    /// Write the output to this file instead of stdout.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct RateArgs {
    #[command(flatten)]
    pub net: NetArgs,
    /// 1-based flat index of the node that receives a constant input;
    /// without it the autonomous rate is computed.
    #[arg(long)]
    pub gamma_node: Option<usize>,
    /// Input intensity at the input node (default 1; needs --gamma-node).
    #[arg(long)]
    pub gamma: Option<f64>,
    /// Use the numeric spectrum even where a closed form applies.
    #[arg(long)]
    pub force_numeric: bool,
    /// Output format: a bare human-readable line by default, or csv/json.
    #[arg(long, value_enum)]
    pub format: Option<OutFormat>,
    /// Write the output to this file instead of stdout.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SweepMode {
    /// Autonomous decay rate per grid point.
    Autonomous,
    /// Input-tracking decay rate per grid point.
    Input,
    /// Which eigenvalue binds the two-layer rate: -1, +1, or 0 on ties.
    Region,
    /// Autonomous versus input rate along an alpha grid at fixed beta.
    Tradeoff,
}

#[derive(Debug, Args)]
pub struct SweepArgs {
    /// Number of layers (at least 2).
    #[arg(long)]
    pub layers: u32,
    /// Members per unit (at least 2); each unit also has one leader.
    #[arg(long)]
    pub breadth: u32,
    #[arg(long, value_enum)]
    pub mode: SweepMode,
    /// Fixed downward weight for tradeoff sweeps (other modes grid it).
    #[arg(long)]
    pub beta: Option<f64>,
    /// Upward-weight axis as lo:hi:n. Defaults: 40 log-spaced points on
    /// [0.1, 10] for rate sweeps, 1..=35 step 1 for region sweeps.
    #[arg(long)]
    pub alpha_grid: Option<GridRange>,
    /// Downward-weight axis as lo:hi:n. Defaults: 40 log-spaced points on
    /// [0.1, 10] for rate sweeps, 0.01..=1.96 step 0.05 for region sweeps.
    #[arg(long)]
    pub beta_grid: Option<GridRange>,
    /// Space explicitly given axes logarithmically instead of linearly.
    #[arg(long)]
    pub log_spacing: bool,
    /// Input intensity for input and tradeoff sweeps (default 1).
    #[arg(long)]
    pub gamma: Option<f64>,
    /// Output format: csv (default) or json.
    #[arg(long, value_enum)]
    pub format: Option<OutFormat>,
    /// Write the output to this file instead of stdout.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    #[command(flatten)]
    pub net: NetArgs,
    /// Multiply every check tolerance by this factor.
    #[arg(long, default_value_t = 1.0)]
    pub tolerance_scale: f64,
    /// Write the report to this file instead of stdout.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

/// A grid axis written `lo:hi:n`. A one-point axis needs `lo = hi`;
/// otherwise the bounds must be increasing.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridRange {
    pub lo: f64,
    pub hi: f64,
    pub n: usize,
}

impl FromStr for GridRange {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let parts: Vec<&str> = s.split(':').collect();
        if parts.len() != 3 {
            return Err(format!("expected lo:hi:n, got `{s}`"));
        }
        let lo: f64 = parts[0].parse().map_err(|_| format!("bad grid bound `{}`", parts[0]))?;
        let hi: f64 = parts[1].parse().map_err(|_| format!("bad grid bound `{}`", parts[1]))?;
        let n: usize = parts[2].parse().map_err(|_| format!("bad grid count `{}`", parts[2]))?;
        if !(lo.is_finite() && hi.is_finite()) {
            return Err("grid bounds must be finite".into());
        }
        if n == 0 {
            return Err("a grid needs at least one point".into());
        }
        if n == 1 && lo != hi {
            return Err("a one-point grid needs lo = hi".into());
        }
        if n > 1 && lo >= hi {
            return Err("a grid needs lo < hi".into());
        }
        Ok(GridRange { lo, hi, n })
    }
}

impl GridRange {
    /// Materializes the axis with exact endpoints, spaced linearly or
    /// logarithmically (the latter needs positive bounds).
    pub fn values(&self, log: bool) -> Result<Vec<f64>, String> {
        if self.n == 1 {
            return Ok(vec![self.lo]);
        }
        if log && self.lo <= 0.0 {
            return Err("log spacing needs positive bounds".into());
        }
        let mut axis = Vec::with_capacity(self.n);
        for k in 0..self.n {
            let t = k as f64 / (self.n - 1) as f64;
            axis.push(if log {
                (self.lo.ln() + t * (self.hi.ln() - self.lo.ln())).exp()
            } else {
                self.lo + t * (self.hi - self.lo)
            });
        }
        axis[0] = self.lo;
        *axis.last_mut().expect("n >= 2") = self.hi;
        Ok(axis)
    }
}
