mod commands;
mod config;
mod output;
mod select;

use std::process::ExitCode;

use clap::Parser;

use commands::{CmdError, Exit};
use config::{Cli, Command};

fn run(cli: &Cli) -> Result<Exit, CmdError> {
    match &cli.command {
        Command::Sample(a) => commands::cmd_sample(a),
        Command::Verify(a) => commands::cmd_verify(a),
        Command::Chain(a) => commands::cmd_chain(a),
        Command::Catalog(a) => commands::cmd_catalog(a),
        Command::Defaults(a) => commands::cmd_defaults(a),
    }
}

fn main() -> ExitCode {
    // clap exits with 2 on its own usage errors
    let cli = Cli::parse();
    let exit = match run(&cli) {
        Ok(e) => e,
        Err(e) => {
            eprintln!("susyp: {e}");
            e.exit()
        }
    };
    ExitCode::from(exit as u8)
}
