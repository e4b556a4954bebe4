//! `cyclo`: command line front end for `cyclo-core`.

mod args;
mod commands;
mod output;

use std::fmt;
use std::process::ExitCode;

use clap::Parser;

use args::{Cli, Command};

/// Failure modes, each with its own exit code.
#[derive(Debug)]
pub enum CliError {
    /// A check or bound failed (exit 1).
    Verification(String),
    /// Bad arguments or invalid input (exit 2).
    Usage(String),
    /// Output could not be written (exit 2).
    Io(String),
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Verification(m) => write!(f, "verification failed: {m}"),
            CliError::Usage(m) => write!(f, "{m}"),
            CliError::Io(m) => write!(f, "i/o error: {m}"),
        }
    }
}

impl From<cyclo_core::Error> for CliError {
    fn from(e: cyclo_core::Error) -> Self {
        CliError::Usage(e.to_string())
    }
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Verification(_) => 1,
            CliError::Usage(_) | CliError::Io(_) => 2,
        }
    }
}

fn run(cli: Cli) -> Result<(), CliError> {
    let workers = cli.workers;
    if workers == Some(0) {
        return Err(CliError::Usage("--workers must be at least 1".into()));
    }
    commands::with_workers(workers, move |exec| match cli.command {
        Command::Compute(a) => commands::compute(a),
        Command::Verify(a) => commands::verify(a, exec),
        Command::Sweep(a) => commands::sweep(a, exec),
        Command::Grid(a) => commands::grid(a, exec),
        Command::Bench(a) => commands::bench(a),
    })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
