//! `mminv`: validation, invariant profiles, comparisons and family
//! experiments for finite mm-spaces.

mod commands;
mod config;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use config::UsageError;

#[derive(Parser)]
#[command(
    name = "mminv",
    version,
    about = "Invariants of finite metric measure spaces"
)]
struct Cli {
    #[command(flatten)]
    opts: Options,
    #[command(subcommand)]
    command: Command,
}

/// Options shared by every command. Flags override `MMINV_*` variables,
/// which override the `--config` file.
#[derive(Args, Debug, Clone, Default)]
pub struct Options {
    /// Run configuration file (JSON or TOML).
    #[arg(long, global = true, env = "MMINV_CONFIG")]
    pub config: Option<PathBuf>,
    /// κ grid: `0.1,0.25,0.5` or `step:0.1`.
    #[arg(long, global = true, env = "MMINV_GRID")]
    pub grid: Option<String>,
    /// Observable-diameter solver: exact, grid, heuristic or auto.
    #[arg(long, global = true, env = "MMINV_MODE")]
    pub mode: Option<String>,
    #[arg(long, global = true, env = "MMINV_SEED")]
    pub seed: Option<u64>,
    /// Enumeration budget of the exact separation and domination searches.
    #[arg(long, global = true, env = "MMINV_BUDGET")]
    pub budget: Option<u64>,
    /// Output file; standard output when absent.
    #[arg(long, global = true, env = "MMINV_OUT")]
    pub out: Option<PathBuf>,
    /// json or csv.
    #[arg(long, global = true, env = "MMINV_FORMAT")]
    pub format: Option<String>,
}

#[derive(Subcommand)]
enum Command {
    /// Check the mm-space axioms of a space file.
    Validate { path: PathBuf },
    /// Observable-diameter and separation profile of a space.
    Invariants { path: PathBuf },
    /// Distances and domination between two spaces.
    Compare { x: PathBuf, y: PathBuf },
    /// Profiles and trend verdicts of a parametrized family.
    Family {
        #[arg(value_name = "CONFIG")]
        family: PathBuf,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = config::RunConfig::resolve(&cli.opts).and_then(|run| match &cli.command {
        Command::Validate { path } => commands::validate(path, &run),
        Command::Invariants { path } => commands::invariants(path, &run),
        Command::Compare { x, y } => commands::compare(x, y, &run),
        Command::Family { family } => commands::family(family, &run),
    });
    match result {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            if e.is::<UsageError>() {
                ExitCode::from(2)
            } else {
                ExitCode::from(1)
            }
        }
    }
}
