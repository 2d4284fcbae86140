//! Command-line companion to `hiercon-core`: argument parsing, file and
//! stream output in CSV/JSON, seeded initial states, and an invariant
//! checker. All numerics live in the core crate; everything here is IO.
//!
//! Exit codes: 0 on success, 1 for rejected input (bad flags, bad files,
//! bad configurations), 2 for numerical failures on input that passed
//! validation (and for failed `verify` checks). Every failure prints a
//! single `error: ...` line to stderr.

use std::ffi::OsString;
use std::fmt;
use std::process::ExitCode;

pub mod args;
mod commands;
mod formats;
mod verify;

/// Everything a subcommand can fail with, split by exit code.
#[derive(Debug)]
pub enum CliError {
    /// Rejected flags or flag combinations.
    Usage(String),
    /// Unreadable or unwritable files.
    Io(String),
    /// An error bubbled up from the numerics crate.
    Core(hiercon_core::Error),
    /// One or more `verify` checks failed.
    VerificationFailed { failed: usize, total: usize },
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) | CliError::Io(_) => 1,
            // The numerical-failure group; everything else the core
            // rejects is a validation error.
            CliError::Core(
                hiercon_core::Error::Degenerate
                | hiercon_core::Error::NoConvergence
                | hiercon_core::Error::Unfittable,
            ) => 2,
            CliError::Core(_) => 1,
            CliError::VerificationFailed { .. } => 2,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Usage(msg) | CliError::Io(msg) => f.write_str(msg),
            CliError::Core(err) => write!(f, "{err}"),
            CliError::VerificationFailed { failed, total } => {
                write!(f, "verification failed: {failed} of {total} checks")
            }
        }
    }
}

impl From<hiercon_core::Error> for CliError {
    fn from(err: hiercon_core::Error) -> Self {
        CliError::Core(err)
    }
}

/// Parses `argv` and runs the selected subcommand. Never panics on user
/// input; the returned code is the process exit status.
pub fn run<I, T>(argv: I) -> ExitCode
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match <args::Cli as clap::Parser>::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(err) => return report_parse_outcome(err),
    };
    match commands::dispatch(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(err.exit_code())
        }
    }
}

/// Help and version requests exit 0 with the rendered text; everything
/// else becomes a one-line diagnostic with exit 1 (clap's default exit 2
/// would collide with the numerical-failure code).
fn report_parse_outcome(err: clap::Error) -> ExitCode {
    use clap::error::ErrorKind;
    if matches!(err.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
        // A closed stdout (`hiercon --help | head`) must not panic or fail.
        use std::io::Write;
        let _ = std::io::stdout().write_all(err.to_string().as_bytes());
        return ExitCode::SUCCESS;
    }
    let rendered = err.to_string();
    let first = rendered
        .lines()
        .find(|line| !line.trim().is_empty())
        .unwrap_or("invalid arguments");
    eprintln!("error: {}", first.trim_start_matches("error: "));
    ExitCode::from(1)
}
