use std::process::ExitCode;

use clap::Parser;
use fsbi_cli::{run, Cli};

fn main() -> anyhow::Result<ExitCode> {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(()) => Ok(ExitCode::SUCCESS),
        Err(e) => {
            eprintln!("fsbi: {e}");
            Ok(ExitCode::from(e.exit_code()))
        }
    }
}
