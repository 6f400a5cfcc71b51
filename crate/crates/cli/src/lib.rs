//! Batch CLI for the Pareto CFAR detectors.
//!
//! Subcommands: `threshold`, `detect`, `roc`, `cfar-sweep`, `compare`,
//! `scan`, `validate`. Every numeric flag can also come from a config
//! file (`--config`, JSON object or `key = value` lines, keys named after
//! the long flags); explicit flags override the file. The default seed
//! comes from `PARETO_CFAR_SEED` when set.
//!
//! Exit codes: 0 success, 1 validation error, 2 in-run assertion failure,
//! 3 I/O error.

pub mod commands;
pub mod config;
pub mod grid;
pub mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand};

use crate::config::ConfigMap;

pub const DEFAULT_SEED: u64 = 20_260_801;
pub const SEED_ENV: &str = "PARETO_CFAR_SEED";

#[derive(Debug)]
pub enum CliError {
    Validation(String),
    Assertion(String),
    Io(String),
}

impl CliError {
    pub fn code(&self) -> u8 {
        match self {
            CliError::Validation(_) => 1,
            CliError::Assertion(_) => 2,
            CliError::Io(_) => 3,
        }
    }

    pub fn validation(msg: impl Into<String>) -> Self {
        CliError::Validation(msg.into())
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Validation(m) => write!(f, "validation: {m}"),
            CliError::Assertion(m) => write!(f, "assertion: {m}"),
            CliError::Io(m) => write!(f, "i/o: {m}"),
        }
    }
}

impl From<pareto_cfar::Error> for CliError {
    fn from(e: pareto_cfar::Error) -> Self {
        CliError::Validation(e.to_string())
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Io(e.to_string())
    }
}

pub type CliResult<T> = Result<T, CliError>;

#[derive(Parser)]
#[command(
    name = "pareto-cfar",
    version,
    about = "CFAR detection of Pareto targets in Pareto clutter"
)]
struct Cli {
    /// Seed for every random stream (flag > config > PARETO_CFAR_SEED > default)
    #[arg(long, global = true)]
    seed: Option<u64>,

    /// Config file mirroring the flags (JSON object or key=value lines)
    #[arg(long, global = true)]
    config: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print the detection threshold for a detector configuration
    Threshold(ThresholdArgs),
    /// Run one detection on an explicit CUT + reference window
    Detect(DetectArgs),
    /// Write a ROC curve (theory, simulation, or both)
    Roc(RocArgs),
    /// Sweep the empirical false-alarm rate over clutter parameters
    CfarSweep(SweepArgs),
    /// Compare case-a/case-b against the clairvoyant bound
    Compare(CompareArgs),
    /// Generate a range profile and slide a detector across it
    Scan(ScanArgs),
    /// Run the distributional-identity validation suite
    Validate(ValidateArgs),
}

#[derive(Args)]
pub struct ThresholdArgs {
    /// clairvoyant | case-a | case-b
    #[arg(long)]
    kind: Option<String>,
    #[arg(long)]
    pfa: Option<f64>,
    /// Reference-window size
    #[arg(long)]
    n: Option<usize>,
    /// Clutter shape (clairvoyant only)
    #[arg(long)]
    alpha: Option<f64>,
    /// Clutter scale (clairvoyant and case-a)
    #[arg(long)]
    h: Option<f64>,
}

#[derive(Args)]
pub struct DetectArgs {
    #[arg(long)]
    kind: Option<String>,
    #[arg(long)]
    pfa: Option<f64>,
    /// CUT observation
    #[arg(long)]
    cut: Option<f64>,
    /// Comma-separated reference-window observations
    #[arg(long)]
    window: Option<String>,
    #[arg(long)]
    alpha: Option<f64>,
    #[arg(long)]
    h: Option<f64>,
}

#[derive(Args)]
pub struct RocArgs {
    #[arg(long)]
    kind: Option<String>,
    #[arg(long)]
    n: Option<usize>,
    #[arg(long)]
    alpha: Option<f64>,
    #[arg(long)]
    rho: Option<f64>,
    #[arg(long)]
    h: Option<f64>,
    /// Comma list or start:stop:step, strictly increasing
    #[arg(long = "pfa-grid")]
    pfa_grid: Option<String>,
    /// Trials per simulated point (accepts 1e6 notation)
    #[arg(long)]
    trials: Option<String>,
    /// theory | sim | both
    #[arg(long)]
    mode: Option<String>,
    #[arg(long)]
    out: Option<PathBuf>,
    /// csv | json
    #[arg(long)]
    format: Option<String>,
}

#[derive(Args)]
pub struct SweepArgs {
    /// case-a | case-b
    #[arg(long)]
    kind: Option<String>,
    #[arg(long)]
    n: Option<usize>,
    #[arg(long)]
    pfa: Option<f64>,
    /// Alpha grid (comma list or start:stop:step)
    #[arg(long)]
    alpha: Option<String>,
    /// Scale grid; a single value for case-a (the known scale)
    #[arg(long)]
    h: Option<String>,
    #[arg(long)]
    trials: Option<String>,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    format: Option<String>,
}

#[derive(Args)]
pub struct CompareArgs {
    #[arg(long)]
    n: Option<usize>,
    #[arg(long)]
    alpha: Option<f64>,
    #[arg(long)]
    rho: Option<f64>,
    #[arg(long)]
    h: Option<f64>,
    #[arg(long = "pfa-grid")]
    pfa_grid: Option<String>,
    /// 0 (default) evaluates the GLRT columns in closed form
    #[arg(long)]
    trials: Option<String>,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    format: Option<String>,
}

#[derive(Args)]
pub struct ScanArgs {
    #[arg(long)]
    cells: Option<String>,
    #[arg(long)]
    alpha: Option<f64>,
    #[arg(long)]
    h: Option<f64>,
    /// case-a | case-b
    #[arg(long)]
    kind: Option<String>,
    #[arg(long)]
    pfa: Option<f64>,
    /// Reference-window size (split symmetrically around the CUT)
    #[arg(long)]
    n: Option<usize>,
    /// Guard cells per side
    #[arg(long)]
    guard: Option<usize>,
    /// Planted targets as cell:rho pairs, e.g. 50:2.5,120:1.0
    #[arg(long)]
    targets: Option<String>,
    #[arg(long)]
    out: Option<PathBuf>,
    /// Also write the generated profile (index,intensity,isTarget)
    #[arg(long = "profile-out")]
    profile_out: Option<PathBuf>,
    #[arg(long)]
    format: Option<String>,
}

#[derive(Args)]
pub struct ValidateArgs {
    /// Draws per check (accepts 1e5 notation)
    #[arg(long)]
    samples: Option<String>,
    /// Add the deliberately mismatched check; it must be reported failed
    #[arg(long = "negative-control")]
    negative_control: bool,
    /// Write the JSON report here instead of stdout
    #[arg(long)]
    out: Option<PathBuf>,
}

/// Parse the command line and dispatch; returns the process exit code.
pub fn run_cli() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) => {
            print!("{e}");
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            eprintln!("{e}");
            return ExitCode::from(1);
        }
    };

    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.code())
        }
    }
}

fn run(cli: Cli) -> CliResult<()> {
    let cfg = match &cli.config {
        Some(path) => ConfigMap::load(path)?,
        None => ConfigMap::empty(),
    };
    let seed = resolve_seed(cli.seed, &cfg)?;

    match cli.command {
        Command::Threshold(args) => commands::threshold(args, &cfg),
        Command::Detect(args) => commands::detect(args, &cfg),
        Command::Roc(args) => commands::roc(args, &cfg, seed),
        Command::CfarSweep(args) => commands::cfar_sweep(args, &cfg, seed),
        Command::Compare(args) => commands::compare(args, &cfg, seed),
        Command::Scan(args) => commands::scan(args, &cfg, seed),
        Command::Validate(args) => commands::validate(args, &cfg, seed),
    }
}

fn resolve_seed(flag: Option<u64>, cfg: &ConfigMap) -> CliResult<u64> {
    if let Some(s) = flag {
        return Ok(s);
    }
    if let Some(s) = cfg.get_parse::<u64>("seed")? {
        return Ok(s);
    }
    match std::env::var(SEED_ENV) {
        Ok(v) => v.parse::<u64>().map_err(|_| {
            CliError::validation(format!("{SEED_ENV} must be an unsigned integer, got `{v}`"))
        }),
        Err(_) => Ok(DEFAULT_SEED),
    }
}
