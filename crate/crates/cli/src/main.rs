use std::process::ExitCode;

use clap::Parser;
use diffcoh::cli::{main_with, Cli};

fn main() -> ExitCode {
    ExitCode::from(main_with(Cli::parse()) as u8)
}
