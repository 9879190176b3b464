use std::process::ExitCode;

use clap::Parser;

mod args;
mod commands;
mod error;
mod output;

use args::{Cli, Command};
use error::CliError;

fn run(cli: &Cli) -> Result<(), CliError> {
    match &cli.command {
        Command::Enumerate(a) => commands::enumerate(a),
        Command::Kernel(a) => commands::kernel(a),
        Command::Tv(a) => commands::tv(a),
        Command::Sample(a) => commands::sample(a),
        Command::Estimate(a) => commands::estimate(a),
        Command::Benchmark(a) => commands::benchmark(a),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(2) } else { ExitCode::SUCCESS };
        }
    };
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {}", e.message());
            e.exit_code()
        }
    }
}
