//! Command-line front end: loads or generates instances, runs the
//! verification sweeps and demos, and streams report rows.

use std::fmt;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use unravel::bounds::FactorKind;
use unravel::entropy::EntropyKind;

mod commands;
pub mod instance;
pub mod report;

pub use report::{Format, ReportRow, SLACK_TOL};

pub const THREADS_ENV: &str = "UNRAVEL_THREADS";

#[derive(Debug, Parser)]
#[command(name = "unravel", version, about = "Extremal unravelings and entropic uncertainty checks")]
pub struct Cli {
    /// Output format, one row per line for json.
    #[arg(long, value_enum, default_value_t = Format::Json, global = true)]
    pub format: Format,

    /// Record wall_time_ms in each row (reports are then no longer reproducible byte for byte).
    #[arg(long, global = true)]
    pub timing: bool,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Gram spectrum and extremal Kraus set of an instance, against random remixings.
    Extremal(ExtremalArgs),
    /// One uncertainty relation for the POVM pair of an instance.
    Uncertainty(UncertaintyArgs),
    /// Randomized verification over channels, states and measurement pairs.
    Sweep(SweepArgs),
    #[command(subcommand)]
    Demo(DemoCommand),
    /// Entropy bounds for generated pure and random mixed ensembles.
    Ensemble(EnsembleArgs),
    /// Grid minimization of the two-variable problem behind the Tsallis bound.
    PhiMin(PhiMinArgs),
}

#[derive(Debug, Args)]
pub struct ExtremalArgs {
    #[arg(long = "in")]
    pub input: PathBuf,
    #[arg(long, value_delimiter = ',', default_values_t = [0.5, 1.0, 2.0])]
    pub alpha_grid: Vec<f64>,
    /// Number of Haar-random remixings to compare against.
    #[arg(long, default_value_t = 200)]
    pub remixes: usize,
    /// Overrides the instance seed.
    #[arg(long)]
    pub seed: Option<u64>,
}

#[derive(Debug, Args)]
pub struct UncertaintyArgs {
    #[arg(long = "in")]
    pub input: PathBuf,
    #[arg(long)]
    pub alpha: f64,
    #[arg(long, default_value = "g")]
    pub factor: FactorKind,
    #[arg(long, default_value = "tsallis")]
    pub kind: EntropyKind,
}

#[derive(Debug, Args)]
pub struct SweepArgs {
    #[arg(long)]
    pub dim: usize,
    #[arg(long, default_value_t = 100)]
    pub trials: usize,
    /// Orders above 1/2 also drive the uncertainty relations.
    #[arg(long, value_delimiter = ',', default_values_t = [0.7, 1.5, 2.0, 3.0])]
    pub alpha_grid: Vec<f64>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value_t = 200)]
    pub remixes: usize,
}

#[derive(Debug, Subcommand)]
pub enum DemoCommand {
    /// DFT-complementary observables: basis state, then random states.
    Dft(DftArgs),
    /// Binned angle against angular momentum for a Gaussian wavepacket.
    Angle(AngleArgs),
}

#[derive(Debug, Args)]
pub struct DftArgs {
    #[arg(long)]
    pub dim: usize,
    #[arg(long)]
    pub alpha: f64,
    #[arg(long, default_value_t = 0)]
    pub trials: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

#[derive(Debug, Args)]
pub struct AngleArgs {
    #[arg(long)]
    pub nbins: usize,
    /// Momentum truncation, `|l| ≤ L`.
    #[arg(long = "L", default_value_t = 50)]
    pub truncation: usize,
    #[arg(long)]
    pub alpha: f64,
    /// Wavepacket width in momentum.
    #[arg(long, default_value_t = 3.0)]
    pub width: f64,
    #[arg(long, default_value_t = unravel::demos::DEFAULT_QUAD_POINTS)]
    pub quad_points: usize,
}

#[derive(Debug, Args)]
pub struct EnsembleArgs {
    #[arg(long)]
    pub dim: usize,
    #[arg(long)]
    pub members: usize,
    #[arg(long)]
    pub alpha: f64,
    #[arg(long, default_value_t = 100)]
    pub trials: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

#[derive(Debug, Args)]
pub struct PhiMinArgs {
    #[arg(long)]
    pub gamma: f64,
    #[arg(long)]
    pub alpha: f64,
    #[arg(long, default_value_t = 400)]
    pub grid: usize,
}

/// Error with the name of the violated invariant, printed as JSON on stderr.
#[derive(Debug, Clone, PartialEq)]
pub struct CliError {
    pub invariant: String,
    pub message: String,
}

impl CliError {
    pub fn new(invariant: &str, message: String) -> Self {
        Self {
            invariant: invariant.to_string(),
            message,
        }
    }

    pub fn format(message: String) -> Self {
        Self::new("instance-format", message)
    }

    pub fn input(message: String) -> Self {
        Self::new("input-file", message)
    }

    pub fn output(e: impl fmt::Display) -> Self {
        Self::new("output", e.to_string())
    }

    pub fn to_json(&self) -> String {
        serde_json::json!({"error": {"invariant": self.invariant, "message": self.message}}).to_string()
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.invariant, self.message)
    }
}

impl std::error::Error for CliError {}

impl From<unravel::Error> for CliError {
    fn from(e: unravel::Error) -> Self {
        Self::new(e.invariant(), e.to_string())
    }
}

fn thread_pool() -> Result<rayon::ThreadPool, CliError> {
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Ok(v) = std::env::var(THREADS_ENV) {
        let n: usize = v
            .trim()
            .parse()
            .ok()
            .filter(|&n| n > 0)
            .ok_or_else(|| CliError::new("environment", format!("{THREADS_ENV}={v:?} is not a positive integer")))?;
        builder = builder.num_threads(n);
    }
    builder.build().map_err(|e| CliError::new("environment", e.to_string()))
}

/// Runs one command, writing rows to `out`. Returns the emitted rows.
pub fn run(cli: &Cli, out: &mut dyn Write) -> Result<Vec<ReportRow>, CliError> {
    let pool = thread_pool()?;
    let rows = pool.install(|| commands::dispatch(cli))?;
    report::write_rows(&rows, cli.format, out)?;
    Ok(rows)
}

/// Exit status for a finished run: 1 if any row violates its inequality.
pub fn exit_status(rows: &[ReportRow]) -> i32 {
    if rows.iter().any(ReportRow::violated) {
        1
    } else {
        0
    }
}
