use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use mees_core::montecarlo::Measure;
use mees_core::ApproachKind;
use serde::Serialize;

#[derive(Parser, Debug)]
#[command(
    name = "mees",
    version,
    about = "Minimum-energy entangled states and the cost of preparing them",
    args_conflicts_with_subcommands = true,
    after_help = "Without a subcommand the `mees` subcommand runs, e.g.\n  mees --spectra \"0,2,4;0,1,6,9\" --entanglement 0.549"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Option<Command>,
    #[command(flatten)]
    pub mees: MeesArgs,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Solve for the MEES at a given entanglement or inverse temperature.
    Mees(MeesArgs),
    /// Build U_S, Ũ_A or Ũ_B for a target state.
    Synth(SynthArgs),
    /// Build an interaction Hamiltonian and report its efficiency.
    Hamiltonian(HamiltonianArgs),
    /// Evaluate approaches along the MEES family.
    Scan(ScanArgs),
    /// Scatter histograms of random states.
    Montecarlo(MonteCarloArgs),
}

#[derive(Args, Debug, Clone, Serialize)]
pub struct SystemArgs {
    /// Local spectra, `A levels;B levels`, e.g. "0,2,4;0,1,6,9".
    #[arg(long, conflicts_with = "system_file", allow_hyphen_values = true)]
    pub spectra: Option<String>,
    /// JSON file `{"spectrum_a": [...], "spectrum_b": [...]}`.
    #[arg(long)]
    pub system_file: Option<PathBuf>,
}

#[derive(Args, Debug, Clone, Serialize)]
pub struct OutArgs {
    /// Directory for output files; created if missing.
    #[arg(long)]
    pub out_dir: Option<PathBuf>,
}

#[derive(Args, Debug, Clone, Serialize)]
pub struct MeesArgs {
    #[command(flatten)]
    pub system: SystemArgs,
    /// Entanglement entropy in nats.
    #[arg(long, conflicts_with = "beta_g", allow_negative_numbers = true)]
    pub entanglement: Option<f64>,
    /// Inverse temperature of the MEES.
    #[arg(long, allow_negative_numbers = true)]
    pub beta_g: Option<f64>,
    #[command(flatten)]
    pub out: OutArgs,
}

#[derive(Args, Debug, Clone, Serialize)]
pub struct TargetArgs {
    /// Explicit Schmidt weights λ_i.
    #[arg(long, value_delimiter = ',', conflicts_with_all = ["entanglement", "beta_g", "random_target"])]
    pub weights: Option<Vec<f64>>,
    /// Phases θ_i; zero if omitted.
    #[arg(long, value_delimiter = ',', allow_negative_numbers = true)]
    pub phases: Option<Vec<f64>>,
    /// MEES with this entanglement (nats).
    #[arg(long, conflicts_with_all = ["beta_g", "random_target"], allow_negative_numbers = true)]
    pub entanglement: Option<f64>,
    /// MEES at this inverse temperature.
    #[arg(long, conflicts_with = "random_target", allow_negative_numbers = true)]
    pub beta_g: Option<f64>,
    /// Draw the target at random with this seed.
    #[arg(long, value_name = "SEED")]
    pub random_target: Option<u64>,
    /// Measure for --random-target.
    #[arg(long, value_enum, default_value = "haar-schmidt")]
    pub measure: MeasureArg,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum MeasureArg {
    HaarFull,
    HaarSchmidt,
}

impl From<MeasureArg> for Measure {
    fn from(m: MeasureArg) -> Self {
        match m {
            MeasureArg::HaarFull => Measure::HaarFull,
            MeasureArg::HaarSchmidt => Measure::HaarSchmidt,
        }
    }
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ApproachArg {
    Simple,
    ModifiedSimple,
    GlobalUnitary,
    MssgA,
    MssgB,
}

impl From<ApproachArg> for ApproachKind {
    fn from(a: ApproachArg) -> Self {
        match a {
            ApproachArg::Simple => ApproachKind::Simple,
            ApproachArg::ModifiedSimple => ApproachKind::ModifiedSimple,
            ApproachArg::GlobalUnitary => ApproachKind::GlobalUnitary,
            ApproachArg::MssgA => ApproachKind::MssgA,
            ApproachArg::MssgB => ApproachKind::MssgB,
        }
    }
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum OperatorArg {
    #[value(name = "US", alias = "us")]
    #[serde(rename = "US")]
    Us,
    #[value(name = "UA", alias = "ua")]
    #[serde(rename = "UA")]
    Ua,
    #[value(name = "UB", alias = "ub")]
    #[serde(rename = "UB")]
    Ub,
}

impl OperatorArg {
    pub fn name(self) -> &'static str {
        match self {
            OperatorArg::Us => "US",
            OperatorArg::Ua => "UA",
            OperatorArg::Ub => "UB",
        }
    }
}

#[derive(Args, Debug, Clone, Serialize)]
pub struct SynthArgs {
    #[command(flatten)]
    pub system: SystemArgs,
    #[command(flatten)]
    pub target: TargetArgs,
    #[arg(long, value_enum, default_value = "US")]
    pub operator: OperatorArg,
    #[command(flatten)]
    pub out: OutArgs,
}

#[derive(Args, Debug, Clone, Serialize)]
pub struct HamiltonianArgs {
    #[command(flatten)]
    pub system: SystemArgs,
    #[command(flatten)]
    pub target: TargetArgs,
    #[arg(long, value_enum)]
    pub approach: ApproachArg,
    /// Bath leak ε fixing V for the simple approaches.
    #[arg(long, default_value_t = mees_core::thermal::DEFAULT_LEAK)]
    pub epsilon: f64,
    #[command(flatten)]
    pub out: OutArgs,
}

#[derive(Args, Debug, Clone, Serialize)]
pub struct ScanArgs {
    #[command(flatten)]
    pub system: SystemArgs,
    /// Approaches to evaluate, comma separated; all five by default.
    #[arg(long, value_enum, value_delimiter = ',', num_args = 1..)]
    pub approach: Vec<ApproachArg>,
    /// Number of interior grid points.
    #[arg(long, default_value_t = 200)]
    pub points: usize,
    #[arg(long, default_value_t = mees_core::thermal::DEFAULT_LEAK)]
    pub epsilon: f64,
    /// Fail unless the expected orderings between approaches hold.
    #[arg(long)]
    pub check: bool,
    #[command(flatten)]
    pub out: OutArgs,
}

#[derive(Args, Debug, Clone, Serialize)]
pub struct MonteCarloArgs {
    #[command(flatten)]
    pub system: SystemArgs,
    #[arg(long, value_enum)]
    pub approach: ApproachArg,
    /// Sampling measure; haar-full for simple/global-unitary, haar-schmidt otherwise.
    #[arg(long, value_enum)]
    pub measure: Option<MeasureArg>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value_t = 1_000_000)]
    pub count: u64,
    /// Bins per axis, `N` or `NXxNY`.
    #[arg(long, default_value = "200", value_parser = parse_bins)]
    pub bins: Bins,
    /// Worker threads; all available cores by default.
    #[arg(long)]
    pub workers: Option<usize>,
    #[arg(long, default_value_t = mees_core::thermal::DEFAULT_LEAK)]
    pub epsilon: f64,
    /// Grid points of the co-emitted MEES curve.
    #[arg(long, default_value_t = 200)]
    pub curve_points: usize,
    #[command(flatten)]
    pub out: OutArgs,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Bins {
    pub x: usize,
    pub y: usize,
}

fn parse_bins(s: &str) -> Result<Bins, String> {
    let parse = |t: &str| match t.trim().parse::<usize>() {
        Ok(n) if n > 0 => Ok(n),
        _ => Err(format!("`{t}` is not a positive bin count")),
    };
    match s.split_once(['x', 'X']) {
        Some((a, b)) => Ok(Bins { x: parse(a)?, y: parse(b)? }),
        None => {
            let n = parse(s)?;
            Ok(Bins { x: n, y: n })
        }
    }
}
