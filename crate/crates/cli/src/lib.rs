//! Config-driven experiment runner for the rough-volatility toolkit.
//!
//! Every subcommand reads one JSON config file, runs a computation from
//! `roughvol-core`, and writes three files into `--out`:
//!
//! * `<subcommand>.csv` — the data table (headers, 17 significant digits),
//! * `summary.json`     — machine-readable results,
//! * `meta.json`        — provenance (the only file allowed to differ
//!   between reruns; it carries the wall-clock timestamp).
//!
//! Exit codes: 0 success, 2 unusable config or infeasible parameters,
//! 3 numerical failure. Malformed input must never crash the process.

pub mod commands;
pub mod config;
pub mod output;

use std::panic;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use roughvol_core::CoreError;

#[derive(Parser)]
#[command(name = "roughvol", version, about = "Rough-volatility experiment runner")]
pub struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Certified blow-up time bound with the geometric-ladder table.
    Bound(RunArgs),
    /// Volterra solves across grids with Richardson extrapolation.
    Volterra(RunArgs),
    /// Monte Carlo price estimators (terminal and conditional).
    Simulate(RunArgs),
    /// Martingale-defect ladder via hitting probabilities.
    Defect(RunArgs),
    /// Moment lower-bound ladder and truncated-moment ladder.
    Moment(RunArgs),
    /// Covariance, continuity-modulus, and corridor diagnostics.
    Covcheck(RunArgs),
}

impl Command {
    fn args(&self) -> &RunArgs {
        match self {
            Command::Bound(a)
            | Command::Volterra(a)
            | Command::Simulate(a)
            | Command::Defect(a)
            | Command::Moment(a)
            | Command::Covcheck(a) => a,
        }
    }
}

#[derive(Args)]
pub struct RunArgs {
    /// Path to the JSON run configuration.
    #[arg(long)]
    config: PathBuf,

    /// Output directory; created if missing.
    #[arg(long)]
    out: PathBuf,

    /// Overrides the master seed(s) from the config where one applies.
    #[arg(long)]
    seed: Option<u64>,

    /// Caps the worker count; results are invariant to its value.
    #[arg(long)]
    threads: Option<usize>,
}

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("config {path}: {message}")]
    Config { path: String, message: String },

    #[error("output: {0}")]
    Io(#[from] std::io::Error),

    #[error("serialization: {0}")]
    Json(#[from] serde_json::Error),

    #[error("thread pool: {0}")]
    Threads(String),

    #[error(transparent)]
    Core(#[from] CoreError),

    #[error("internal panic: {0}")]
    Panic(String),
}

/// Exit-code taxonomy: everything the user can fix by editing the config or
/// the command line is 2; failures inside a well-posed computation are 3.
fn exit_code(err: &CliError) -> u8 {
    match err {
        CliError::Core(CoreError::Numerical(_)) => 3,
        CliError::Json(_) | CliError::Panic(_) => 3,
        _ => 2,
    }
}

/// Parses the command line, runs the subcommand, and converts the outcome
/// into an exit code; panics are caught so malformed input can never crash.
pub fn run_cli() -> ExitCode {
    let cli = Cli::parse();
    let result = panic::catch_unwind(panic::AssertUnwindSafe(|| run(cli)))
        .unwrap_or_else(|payload| Err(CliError::Panic(panic_message(payload))));
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(exit_code(&err))
        }
    }
}

fn panic_message(payload: Box<dyn std::any::Any + Send>) -> String {
    if let Some(s) = payload.downcast_ref::<&str>() {
        (*s).to_string()
    } else if let Some(s) = payload.downcast_ref::<String>() {
        s.clone()
    } else {
        "unknown panic payload".into()
    }
}

fn run(cli: Cli) -> Result<(), CliError> {
    match cli.command.args().threads {
        Some(k) => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(k)
                .build()
                .map_err(|e| CliError::Threads(e.to_string()))?;
            pool.install(|| dispatch(&cli.command))
        }
        None => dispatch(&cli.command),
    }
}

fn dispatch(command: &Command) -> Result<(), CliError> {
    match command {
        Command::Bound(a) => commands::bound::run(a),
        Command::Volterra(a) => commands::volterra::run(a),
        Command::Simulate(a) => commands::simulate::run(a),
        Command::Defect(a) => commands::defect::run(a),
        Command::Moment(a) => commands::moment::run(a),
        Command::Covcheck(a) => commands::covcheck::run(a),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn user_fixable_errors_exit_2() {
        let cases = [
            CliError::Config { path: "x.json".into(), message: "bad".into() },
            CliError::Io(std::io::Error::other("disk")),
            CliError::Threads("nope".into()),
            CliError::Core(CoreError::Domain("d".into())),
            CliError::Core(CoreError::Data("d".into())),
            CliError::Core(CoreError::Infeasible("i".into())),
        ];
        for err in cases {
            assert_eq!(exit_code(&err), 2, "{err}");
        }
    }

    #[test]
    fn internal_failures_exit_3() {
        assert_eq!(exit_code(&CliError::Core(CoreError::Numerical("n".into()))), 3);
        assert_eq!(exit_code(&CliError::Panic("p".into())), 3);
    }
}
