//! `spin16`: batch front-end for the spin-symbol verification and the
//! numerical experiments.
//!
//! Exit codes: 0 success, 2 verification mismatch, 3 budget exceeded,
//! 4 configuration error, 1 anything else.

mod cache;
mod commands;
mod config;

use std::fmt;

use clap::Parser;

use config::Cli;

#[derive(Debug)]
pub enum CliError {
    Config(String),
    Budget(String),
    Failed(String),
}

impl CliError {
    fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) => 4,
            CliError::Budget(_) => 3,
            CliError::Failed(_) => 1,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Config(m) => write!(f, "configuration error: {m}"),
            CliError::Budget(m) => write!(f, "budget exceeded: {m}"),
            CliError::Failed(m) => write!(f, "{m}"),
        }
    }
}

/// What a successful run found.
pub enum Outcome {
    Ok,
    Mismatch(String),
}

fn run() -> i32 {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            // --help and --version come through here too.
            let code = if e.use_stderr() { 4 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    match commands::execute(cli) {
        Ok(Outcome::Ok) => 0,
        Ok(Outcome::Mismatch(m)) => {
            eprintln!("spin16: mismatch: {m}");
            2
        }
        Err(e) => {
            eprintln!("spin16: {e}");
            e.exit_code()
        }
    }
}

fn main() {
    std::process::exit(run());
}
