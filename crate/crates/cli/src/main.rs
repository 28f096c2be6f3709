//! `equipoise`: command-line access to the potential/density transforms,
//! the catalog, MaxEnt fitting, Langevin simulation and sample decomposition.
//!
//! Exit codes: 0 success, 2 input or precondition error, 3 infeasible problem.

mod commands;
mod expr;
mod input;
mod table;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::table::Support;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Input(String),
    #[error("{0}")]
    Infeasible(String),
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Input(_) => 2,
            CliError::Infeasible(_) => 3,
        }
    }
}

impl From<equipoise::Error> for CliError {
    fn from(e: equipoise::Error) -> Self {
        match e {
            equipoise::Error::Unattainable { .. } => CliError::Infeasible(e.to_string()),
            other => CliError::Input(other.to_string()),
        }
    }
}

#[derive(Parser)]
#[command(
    name = "equipoise",
    version,
    about = "Potentials, equilibrium densities and their intensities in one dimension"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Tabulate a catalog family: x, f, U_tilde, E_c.
    Catalog(CatalogArgs),
    /// Convert a potential, density or intensity into another representation.
    Transform(TransformArgs),
    /// Fit k·exp(−λu) to a u-moment.
    Maxent(MaxentArgs),
    /// Run Langevin chains and compare their histogram with k·exp(−U).
    Simulate(SimulateArgs),
    /// Estimate density, normalized potential and intensity from samples.
    Decompose(DecomposeArgs),
}

#[derive(Args, Debug, Default)]
pub struct GridArgs {
    /// A `grid` input file, instead of the bound flags.
    #[arg(long = "grid", conflicts_with_all = ["lower", "upper", "points"])]
    pub grid_file: Option<PathBuf>,
    /// Lower grid bound.
    #[arg(long, allow_negative_numbers = true)]
    pub lower: Option<f64>,
    /// Upper grid bound.
    #[arg(long, allow_negative_numbers = true)]
    pub upper: Option<f64>,
    /// Number of grid points (continuous grids).
    #[arg(long)]
    pub points: Option<usize>,
    /// Grid kind; `auto` reads lattices from consecutive integer x values.
    #[arg(long, value_enum)]
    pub support: Option<Support>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum FamilyArg {
    Uniform,
    Exponential,
    Normal,
    #[value(alias = "linear_constant")]
    LinearConstant,
    Poisson,
    Gamma,
    Pearson,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum SignArg {
    Paper,
    Standard,
}

#[derive(Args, Debug)]
#[command(allow_negative_numbers = true)]
pub struct CatalogArgs {
    #[arg(long, value_enum)]
    pub family: FamilyArg,
    /// Uniform lattice size.
    #[arg(long)]
    pub n: Option<u32>,
    /// Exponential rate, linear coefficient, or Pearson location.
    #[arg(long)]
    pub a: Option<f64>,
    /// Quadratic coefficient of the linear-constant family.
    #[arg(long)]
    pub b: Option<f64>,
    #[arg(long)]
    pub mu: Option<f64>,
    #[arg(long)]
    pub sigma: Option<f64>,
    #[arg(long)]
    pub lambda: Option<f64>,
    #[arg(long)]
    pub alpha: Option<f64>,
    #[arg(long)]
    pub beta: Option<f64>,
    #[arg(long)]
    pub b0: Option<f64>,
    #[arg(long)]
    pub b1: Option<f64>,
    #[arg(long)]
    pub b2: Option<f64>,
    #[arg(long, value_enum, default_value = "standard")]
    pub sign: SignArg,
    #[command(flatten)]
    pub grid: GridArgs,
    /// Output CSV (stdout if omitted).
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Target {
    Density,
    Potential,
    Intensity,
}

#[derive(Args, Debug)]
pub struct TransformArgs {
    /// Potential input file (JSON) or a table with an x column and one of
    /// f (density), U / U_tilde (potential), E_c / E_s (intensity).
    #[arg(long = "in")]
    pub input: PathBuf,
    #[arg(long, value_enum)]
    pub to: Target,
    /// Grid for a potential input file that carries none.
    #[command(flatten)]
    pub grid: GridArgs,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Args, Debug)]
#[command(allow_negative_numbers = true)]
pub struct MaxentArgs {
    /// Polynomial in x such as 'x^2', or a potential input file.
    #[arg(long, required_unless_present = "problem")]
    pub u: Option<String>,
    /// Target u-moment.
    #[arg(long, conflicts_with = "samples")]
    pub moment: Option<f64>,
    /// Sample CSV; the target is the sample mean of u.
    #[arg(long)]
    pub samples: Option<PathBuf>,
    /// A `maxent_problem` input file instead of --u/--moment and grid flags.
    #[arg(long, conflicts_with_all = ["u", "moment", "samples"])]
    pub problem: Option<PathBuf>,
    #[command(flatten)]
    pub grid: GridArgs,
    #[arg(long)]
    pub lambda_init: Option<f64>,
    #[arg(long)]
    pub tol: Option<f64>,
    #[arg(long)]
    pub max_iter: Option<usize>,
    /// Density table output.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Solution JSON output (stdout if omitted).
    #[arg(long)]
    pub json: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct SimulateArgs {
    /// A `sim_config` input file.
    #[arg(long)]
    pub config: PathBuf,
    /// Overrides the seed in the config.
    #[arg(long)]
    pub seed: Option<u64>,
    /// Histogram CSV output.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Result JSON output (stdout if omitted).
    #[arg(long)]
    pub json: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum EstimatorArg {
    Histogram,
    Kernel,
}

#[derive(Args, Debug)]
pub struct DecomposeArgs {
    /// Sample CSV; uses the x column, or the first column if there is none.
    #[arg(long)]
    pub samples: PathBuf,
    #[arg(long, value_enum, default_value = "kernel")]
    pub estimator: EstimatorArg,
    /// Histogram bins.
    #[arg(long, default_value_t = 100)]
    pub bins: usize,
    /// Kernel bandwidth; Silverman's rule if omitted.
    #[arg(long)]
    pub bandwidth: Option<f64>,
    /// Grid; defaults to the sample range with 1001 points.
    #[command(flatten)]
    pub grid: GridArgs,
    /// Table output: x, f, U_tilde, E_s, mask.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Report JSON output (stdout if omitted).
    #[arg(long)]
    pub json: Option<PathBuf>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Catalog(args) => commands::catalog(&args),
        Command::Transform(args) => commands::transform(&args),
        Command::Maxent(args) => commands::maxent(&args),
        Command::Simulate(args) => commands::simulate(&args),
        Command::Decompose(args) => commands::decompose(&args),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
