use std::process::ExitCode;

use clap::Parser;
use lattice_wigner_cli::{init_threads, run, Cli};

fn main() -> ExitCode {
    let cli = Cli::parse();
    match init_threads().and_then(|()| run(&cli)) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("lwig: {err}");
            ExitCode::from(err.exit_code())
        }
    }
}
