//! `shiftdyn` command-line front end. CSV artifacts go to `--out-dir`
//! (default `$SHIFTDYN_OUT_DIR`, else `./shiftdyn-out`).
//!
//! Exit status: 0 on success, 1 when an assertion fails, 2 for an invalid
//! configuration, 3 for I/O failures.

mod args;
mod commands;
mod error;
mod output;
mod suite;
mod vector_spec;

use std::process::ExitCode;

use clap::Parser;

use args::{Cli, Command};
use error::CliResult;

fn run(cli: &Cli) -> CliResult<()> {
    let out = cli.out_dir.as_path();
    match &cli.command {
        Command::Orbit(a) => commands::orbit(out, a),
        Command::Lyapunov { orbit, fit_window } => commands::lyapunov(out, orbit, *fit_window),
        Command::Classify(a) => commands::classify(out, a),
        Command::Witness { family, kmax } => commands::witness(out, family, *kmax),
        Command::VerifyForms { family, samples, horizon, seed, tolerance } => {
            commands::verify_forms(out, family, *samples, *horizon, *seed, *tolerance)
        }
        Command::Spectral { family, mode, nmax, window, tolerance } => {
            commands::spectral(out, family, *mode, *nmax, *window, *tolerance)
        }
        Command::Continuous(a) => commands::continuous(out, a),
        Command::Suite { seed } => suite::run(out, *seed),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("shiftdyn: {e}");
            e.exit_code()
        }
    }
}
