use std::process::ExitCode;

use clap::Parser;
use voi::{Cli, Command};

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Run(args) => voi::run(args),
    };
    match result {
        Ok(_) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("voi: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
