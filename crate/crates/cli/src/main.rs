use std::process::ExitCode;

use clap::Parser;
use quilt_cli::cli::Cli;

fn main() -> ExitCode {
    match quilt_cli::commands::execute(Cli::parse()) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
