use std::process::ExitCode;

use clap::Parser;
use logq_cli::args::Cli;

fn main() -> ExitCode {
    let cli = Cli::parse();
    match logq_cli::run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}
