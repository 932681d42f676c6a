use std::process::ExitCode;

use clap::Parser;
use oddtrans::cli::{execute, Cli};

fn main() -> ExitCode {
    let argv: Vec<String> = std::env::args().collect();
    let cli = Cli::parse_from(&argv);
    ExitCode::from(execute(&cli, &argv))
}
