//! Command-line arguments.

use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(name = "fgc", version, about = "Spontaneous-emission spectra and trapping conditions for driven atomic loops")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Compute the emission spectrum of a scenario.
    Spectrum(SpectrumArgs),
    /// Evaluate (or solve) the trapping condition.
    Trapping(TrappingArgs),
    /// Sweep one parameter and record a metric.
    Sweep(SweepArgs),
    /// Check the named presets against their expected signatures.
    Validate(ValidateArgs),
}

/// Scenario source shared by every command.
#[derive(Debug, Clone, Args)]
pub struct SourceArgs {
    /// Scenario JSON file.
    #[arg(long, conflicts_with = "preset")]
    pub config: Option<PathBuf>,
    /// Built-in preset name instead of a file.
    #[arg(long)]
    pub preset: Option<String>,
}

/// Inclusive uniform range `min:max:count`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridSpec {
    pub min: f64,
    pub max: f64,
    pub count: usize,
}

impl GridSpec {
    pub fn points(&self) -> Vec<f64> {
        fgc_core::analysis::linspace(self.min, self.max, self.count)
    }
}

impl FromStr for GridSpec {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let parts: Vec<&str> = s.split(':').collect();
        let [min, max, count] = parts[..] else {
            return Err(format!("expected min:max:count, got `{s}`"));
        };
        let min: f64 = min.trim().parse().map_err(|_| format!("bad minimum `{min}`"))?;
        let max: f64 = max.trim().parse().map_err(|_| format!("bad maximum `{max}`"))?;
        let count: usize = count.trim().parse().map_err(|_| format!("bad count `{count}`"))?;
        if !min.is_finite() || !max.is_finite() || min >= max {
            return Err(format!("need finite min < max, got {min}:{max}"));
        }
        if count < 2 {
            return Err(format!("count must be at least 2, got {count}"));
        }
        Ok(Self { min, max, count })
    }
}

impl fmt::Display for GridSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}:{}", self.min, self.max, self.count)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum MethodArg {
    Analytic,
    Timedomain,
    Both,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, Args)]
pub struct SpectrumArgs {
    #[command(flatten)]
    pub source: SourceArgs,
    /// Detuning grid `min:max:count`.
    #[arg(long, default_value = "-30:30:6001", allow_hyphen_values = true)]
    pub grid: GridSpec,
    #[arg(long, value_enum, default_value_t = MethodArg::Analytic)]
    pub method: MethodArg,
    /// Results file; without it the CSV goes to stdout.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Output format; defaults to the `--out` extension, else CSV.
    #[arg(long, value_enum)]
    pub format: Option<Format>,
    /// SVG plot of the branch and total intensities.
    #[arg(long)]
    pub svg: Option<PathBuf>,
    /// Integrator tolerance for the time-domain path.
    #[arg(long, default_value_t = fgc_core::dynamics::DEFAULT_TOL)]
    pub tol: f64,
    /// Initial propagation horizon in units of 1/Γ.
    #[arg(long, default_value_t = fgc_core::dynamics::DEFAULT_T_FINAL)]
    pub t_final: f64,
    /// Include inter-branch interference in the total.
    #[arg(long)]
    pub cross_terms: bool,
    /// Peak threshold as a fraction of the maximum.
    #[arg(long, default_value_t = fgc_core::analysis::DEFAULT_PROMINENCE)]
    pub prominence: f64,
}

#[derive(Debug, Clone, Args)]
pub struct TrappingArgs {
    #[command(flatten)]
    pub source: SourceArgs,
    /// Complete |Ω4| and φ3 (D1: Ω_m2) so the condition holds.
    #[arg(long)]
    pub solve: bool,
    /// With --solve, set Γ3 = Γ1 instead of refusing.
    #[arg(long, requires = "solve")]
    pub override_gamma: bool,
    /// Amended scenario path for --solve.
    #[arg(long, requires = "solve")]
    pub out: Option<PathBuf>,
    /// Tolerance of the condition check.
    #[arg(long, default_value_t = fgc_core::trapping::DEFAULT_TOLERANCE)]
    pub tol: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Param {
    Phase2,
    Phase3,
    Mag1,
    Mag2,
    Mag3,
    Mag4,
    Gamma1,
    Gamma2,
    Gamma3,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Metric {
    #[value(name = "trapped_fraction")]
    TrappedFraction,
    #[value(name = "total_area")]
    TotalArea,
    #[value(name = "peak_count")]
    PeakCount,
    #[value(name = "branch2_area")]
    Branch2Area,
}

impl Metric {
    pub fn name(self) -> &'static str {
        match self {
            Metric::TrappedFraction => "trapped_fraction",
            Metric::TotalArea => "total_area",
            Metric::PeakCount => "peak_count",
            Metric::Branch2Area => "branch2_area",
        }
    }
}

#[derive(Debug, Clone, Args)]
pub struct SweepArgs {
    #[command(flatten)]
    pub source: SourceArgs,
    /// Parameter to vary (chain numbering; D1 maps to m2, o2, o1, m1).
    #[arg(long, value_enum)]
    pub vary: Param,
    /// Sweep values `min:max:count`.
    #[arg(long, allow_hyphen_values = true)]
    pub range: GridSpec,
    /// Quantity recorded at each sweep point.
    #[arg(long, value_enum)]
    pub metric: Metric,
    /// Detuning grid for peak_count.
    #[arg(long, default_value = "-30:30:6001", allow_hyphen_values = true)]
    pub grid: GridSpec,
    /// Results CSV; without it the CSV goes to stdout.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Integrator tolerance for trapped_fraction.
    #[arg(long, default_value_t = fgc_core::dynamics::DEFAULT_TOL)]
    pub tol: f64,
    /// Initial propagation horizon in units of 1/Γ.
    #[arg(long, default_value_t = fgc_core::dynamics::DEFAULT_T_FINAL)]
    pub t_final: f64,
    /// Peak threshold as a fraction of the maximum.
    #[arg(long, default_value_t = fgc_core::analysis::DEFAULT_PROMINENCE)]
    pub prominence: f64,
}

#[derive(Debug, Clone, Args)]
pub struct ValidateArgs {
    /// Preset name, or `all`.
    pub target: String,
}
