//! `mmwpl`: LOS probability, path loss and outage from the command line.
//!
//! Exit codes: 0 on success, 1 when a well-formed input has no numerical
//! answer, 2 for malformed input or usage errors.

mod args;
mod commands;

use std::process::ExitCode;

use clap::Parser;

use args::{Cli, Command};
use commands::CliError;

const THREADS_ENV: &str = "MMWPL_THREADS";

fn configure_threads() -> Result<(), CliError> {
    let Ok(raw) = std::env::var(THREADS_ENV) else {
        return Ok(());
    };
    let n: usize = raw
        .trim()
        .parse()
        .ok()
        .filter(|&n| n > 0)
        .ok_or_else(|| CliError::Input(format!("{THREADS_ENV} must be a positive integer, got {raw:?}")))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| CliError::Input(e.to_string()))
}

fn run(cli: Cli) -> Result<(), CliError> {
    configure_threads()?;
    match &cli.command {
        Command::LosProb(a) => commands::los_prob(a),
        Command::FitPlos(a) => commands::fit_plos(a),
        Command::Pathloss(a) => commands::pathloss(a),
        Command::Fit(a) => commands::fit(a),
        Command::Outage(a) => commands::outage(a),
        Command::Synth(a) => commands::synth(a),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("mmwpl: error: {}", e.message());
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
