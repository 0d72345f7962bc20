//! Command-line front end: reads a run configuration, evaluates transforms
//! and inversions over a grid, and runs the identity suites on one model
//! or a seeded ensemble.

pub mod config;
pub mod run;

use std::io::Write;
use std::path::PathBuf;

use clap::Parser;

pub use config::{parse_complex, parse_config, Command, ConfigError, ModelSource, RunConfig};
pub use run::{run_command, CliError, EXIT_FAIL, EXIT_INVALID, EXIT_PASS};

#[derive(Debug, Parser)]
#[command(
    name = "plemelj",
    version,
    about = "Stieltjes transforms of exponential sums and signal recovery"
)]
pub struct Cli {
    #[arg(value_enum)]
    pub command: Command,
    /// Run configuration; optional for `sweep` only.
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Write the CSV (or text for analyze/verify) here instead of stdout.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Write the sweep report here instead of stdout.
    #[arg(long)]
    pub report: Option<PathBuf>,
    /// Ensemble seed, overriding `[run] seed`.
    #[arg(long)]
    pub seed: Option<u64>,
}

/// Loads the config named on the command line, applies the flag overrides
/// and runs the command.
pub fn main_with(cli: Cli, out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    let mut cfg = match &cli.config {
        Some(path) => match std::fs::read_to_string(path) {
            Ok(text) => match parse_config(&text) {
                Ok(cfg) => cfg,
                Err(e) => {
                    let _ = writeln!(err, "error: {}: {e}", path.display());
                    return EXIT_INVALID;
                }
            },
            Err(e) => {
                let _ = writeln!(err, "error: cannot read {}: {e}", path.display());
                return EXIT_INVALID;
            }
        },
        None if cli.command == Command::Sweep => RunConfig::default(),
        None => {
            let _ = writeln!(err, "error: {} needs --config", cli.command.name());
            return EXIT_INVALID;
        }
    };
    if let Some(c) = cfg.command {
        if c != cli.command {
            let _ = writeln!(
                err,
                "error: command {} conflicts with [run] command = {}",
                cli.command.name(),
                c.name()
            );
            return EXIT_INVALID;
        }
    }
    cfg.command = Some(cli.command);
    if cli.out.is_some() {
        cfg.out = cli.out;
    }
    if cli.report.is_some() {
        cfg.report = cli.report;
    }
    if let Some(seed) = cli.seed {
        cfg.ensemble.seed = seed;
    }
    run_command(&cfg, out, err)
}
