//! Command-line front end: argument parsing, config-file defaults and
//! dispatch to the subcommands.

mod args;
mod commands;
mod config;
mod output;

use std::ffi::OsString;

use clap::{CommandFactory, Parser};

pub use args::{Cli, Command, OutputFormat};
pub use output::{Cell, Table};

/// Process exit codes.
pub mod exit {
    pub const OK: i32 = 0;
    /// Positive but not completely positive, or another domain-negative verdict.
    pub const DOMAIN_NEGATIVE: i32 = 1;
    /// Not even positive.
    pub const NOT_POSITIVE: i32 = 2;
    pub const USAGE: i32 = 64;
    pub const IO: i32 = 74;
}

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Library(#[from] crate::Error),
    #[error("I/O error: {0}")]
    Io(#[from] std::io::Error),
    #[error("CSV error: {0}")]
    Csv(#[from] csv::Error),
    #[error("JSON error: {0}")]
    Json(#[from] serde_json::Error),
}

impl CliError {
    /// The reader went away (e.g. `| head`); not worth reporting.
    pub fn is_broken_pipe(&self) -> bool {
        let io = match self {
            CliError::Io(e) => Some(e),
            CliError::Csv(e) => match e.kind() {
                csv::ErrorKind::Io(e) => Some(e),
                _ => None,
            },
            _ => None,
        };
        io.is_some_and(|e| e.kind() == std::io::ErrorKind::BrokenPipe)
    }

    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Io(_) => exit::IO,
            CliError::Csv(e) if matches!(e.kind(), csv::ErrorKind::Io(_)) => exit::IO,
            _ => exit::USAGE,
        }
    }
}

pub type CliResult<T> = std::result::Result<T, CliError>;

/// Parses `argv` (with config-file defaults spliced in), runs the command and
/// returns the exit code. Diagnostics go to stderr.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let argv: Vec<OsString> = argv.into_iter().map(Into::into).collect();
    let argv = match config::splice_config(&Cli::command(), argv) {
        Ok(a) => a,
        Err(e) => {
            eprintln!("error: {e}");
            return e.exit_code();
        }
    };
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { exit::USAGE } else { exit::OK };
            let _ = e.print();
            return code;
        }
    };
    match commands::execute(&cli) {
        Ok(code) => code,
        Err(e) if e.is_broken_pipe() => exit::OK,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}
