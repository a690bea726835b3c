mod args;
mod commands;
mod config;
mod error;
mod output;
mod parse;

use std::process::ExitCode;

use clap::Parser;

use args::{Cli, Command};
use error::CliError;

fn run() -> Result<(), CliError> {
    let argv = config::expand(std::env::args_os().collect())?;
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let code = e.exit_code();
            let _ = e.print();
            std::process::exit(code);
        }
    };
    match &cli.command {
        Command::Negativity(a) => commands::negativity(a),
        Command::Critical(a) => commands::critical(a),
        Command::Sweep(a) => commands::sweep(a),
        Command::Verify(a) => commands::verify_cmd(a),
        Command::Asymptotes(a) => commands::asymptotes(a),
    }
}

fn main() -> ExitCode {
    match run() {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("ghz-decay: {e}");
            e.exit_code()
        }
    }
}
