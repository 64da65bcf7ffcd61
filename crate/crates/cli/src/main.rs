//! `deltashock` command-line front end.
//!
//! Exit codes: 0 success, 1 mathematical failure, 2 usage or config error.

mod commands;
mod config;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use crate::config::Config;

#[derive(Debug, Parser)]
#[command(name = "deltashock", version, about = "Delta-shock laboratory for the 2x2 elastodynamics system")]
struct Cli {
    /// TOML configuration file; defaults reproduce the worked example.
    #[arg(long, global = true)]
    config: Option<PathBuf>,

    /// Output directory (created if missing).
    #[arg(long, global = true, default_value = ".")]
    out: PathBuf,

    /// Format for tabular outputs.
    #[arg(long, global = true, value_enum, default_value_t = Format::Csv)]
    format: Format,

    /// Smallest ε of the dyadic grid.
    #[arg(long, global = true)]
    eps_min: Option<f64>,

    /// Largest ε of the dyadic grid.
    #[arg(long, global = true)]
    eps_max: Option<f64>,

    /// Seed for randomized sweeps.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Check every weak expansion of the regularized products.
    VerifyExpansions,
    /// Tabulate the front trajectory and admissibility margins.
    Front,
    /// Pair the PDE residuals of the smooth ansatz with test functions.
    VerifySolution,
    /// Solve the classical Riemann problem (k > 0).
    Riemann,
    /// Compare weak limits for k > 0 against k = 0.
    KLimit,
    /// Re-extract the coefficient equations on random admissible data.
    Replay,
}

/// Failure classes mapped onto exit codes.
#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Math(String),
}

impl CliError {
    /// Degenerate or inadmissible data are mathematical failures; every
    /// other library error is a usage error.
    pub fn from_lib(e: deltashock::Error) -> Self {
        use deltashock::Error as E;
        match e {
            E::DegenerateJump | E::Inadmissible(_) | E::Extraction { .. } | E::NonFiniteIntegrand { .. } => {
                CliError::Math(e.to_string())
            }
            _ => CliError::Usage(e.to_string()),
        }
    }

    fn code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Math(_) => 1,
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Usage(m) => write!(f, "usage error: {m}"),
            CliError::Math(m) => write!(f, "error: {m}"),
        }
    }
}

/// Shared run context.
pub struct Ctx {
    pub config: Config,
    pub out: PathBuf,
    pub format: Format,
    pub seed: u64,
}

impl Ctx {
    pub fn write(&self, name: &str, contents: &str) -> Result<(), CliError> {
        let path = self.out.join(name);
        std::fs::write(&path, contents).map_err(|e| CliError::Usage(format!("cannot write {}: {e}", path.display())))
    }

    pub fn write_json<T: serde::Serialize>(&self, name: &str, value: &T) -> Result<(), CliError> {
        let text = serde_json::to_string_pretty(value).map_err(|e| CliError::Usage(e.to_string()))?;
        self.write(name, &(text + "\n"))
    }
}

fn run(cli: Cli) -> Result<bool, CliError> {
    let mut config = Config::load(cli.config.as_deref())?;
    if let Some(v) = cli.eps_min {
        config.grid.eps_min = v;
        config.grid.eps = None;
    }
    if let Some(v) = cli.eps_max {
        config.grid.eps_max = v;
        config.grid.eps = None;
    }
    std::fs::create_dir_all(&cli.out)
        .map_err(|e| CliError::Usage(format!("cannot create {}: {e}", cli.out.display())))?;
    let ctx = Ctx { config, out: cli.out, format: cli.format, seed: cli.seed };
    match cli.command {
        Command::VerifyExpansions => commands::verify_expansions(&ctx),
        Command::Front => commands::front(&ctx),
        Command::VerifySolution => commands::verify_solution(&ctx),
        Command::Riemann => commands::riemann(&ctx),
        Command::KLimit => commands::k_limit(&ctx),
        Command::Replay => commands::replay(&ctx),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("{e}");
            ExitCode::from(e.code())
        }
    }
}
