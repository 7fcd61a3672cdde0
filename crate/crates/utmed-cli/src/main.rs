//! `utmed` — command-line front end for the image restoration toolkit.
//!
//! Subcommands: `noise` (seeded corruption), `denoise` (the switched
//! trimmed-median filter and baselines), `metrics` (MSE/PSNR/IEF),
//! `sweep` (CSV benchmark grids), and `verify` (exhaustive network and
//! scheduler checks).
//!
//! Exit codes: 0 success, 1 usage error, 2 I/O or data error,
//! 3 verification failure.

mod commands;
mod config;

use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::Parser;

use commands::{Cli, CliError};

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(err) => {
            // help and version requests are not errors
            if matches!(err.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                print!("{err}");
                return ExitCode::SUCCESS;
            }
            eprint!("{err}");
            return ExitCode::from(1);
        }
    };
    match commands::run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(err.exit_code())
        }
    }
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 1,
            CliError::Io(_) => 2,
            CliError::Verification(_) => 3,
        }
    }
}
