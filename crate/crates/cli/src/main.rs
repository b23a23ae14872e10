use std::process::ExitCode;

use clap::Parser;
use hyperdmod_cli::{human, render, run, Cli, EXIT_INVALID};

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = run(&cli);
    let text = if cli.common.human { human(&outcome.report) } else { render(&outcome.report) };
    let code = match &cli.common.out {
        Some(path) => match std::fs::write(path, &text) {
            Ok(()) => outcome.code,
            Err(e) => {
                eprintln!("cannot write {}: {e}", path.display());
                EXIT_INVALID
            }
        },
        None => {
            print!("{text}");
            outcome.code
        }
    };
    ExitCode::from(code as u8)
}
