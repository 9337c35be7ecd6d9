//! `qdp` command-line front end. Every subcommand writes to a caller-supplied
//! sink so it can be driven from tests exactly as from the shell.

use std::ffi::OsString;
use std::io::Write;

use clap::Parser;
use thiserror::Error;

pub mod args;
pub mod commands;
pub mod config;
pub mod format;

pub use args::Cli;
pub use config::Config;

#[derive(Debug, Error)]
pub enum CliError {
    /// Bad flags, bad config, or parameters outside their domain.
    #[error("{0}")]
    Usage(String),
    #[error("cannot write {path}: {source}")]
    Output {
        path: String,
        source: std::io::Error,
    },
}

impl CliError {
    pub fn flag(flag: &str, msg: impl std::fmt::Display) -> Self {
        CliError::Usage(format!("invalid --{flag}: {msg}"))
    }
}

impl From<std::io::Error> for CliError {
    fn from(source: std::io::Error) -> Self {
        CliError::Output {
            path: "<stdout>".into(),
            source,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Status {
    Success,
    ValidationFailed,
}

pub const EXIT_SUCCESS: i32 = 0;
pub const EXIT_VALIDATION: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

/// Parses `argv` (including the program name), runs the subcommand and
/// returns the process exit code.
pub fn run_from_args<I, T>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let code = e.exit_code();
            let rendered = e.render().to_string();
            if code == 0 {
                let _ = write!(out, "{rendered}");
            } else {
                let _ = write!(err, "{rendered}");
            }
            return if code == 0 { EXIT_SUCCESS } else { EXIT_USAGE };
        }
    };
    match commands::run(&cli, out) {
        Ok(Status::Success) => EXIT_SUCCESS,
        Ok(Status::ValidationFailed) => EXIT_VALIDATION,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            EXIT_USAGE
        }
    }
}
