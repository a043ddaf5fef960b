//! Library surface of the `sqbath` command-line front end: configuration
//! parsing, single-run execution, and parameter sweeps. The binary in
//! `main.rs` is a thin argument-parsing shell over these functions.

pub mod config;
pub mod run;
pub mod sweep;

use std::fmt;

/// CLI failure classes, mapped one-to-one onto exit codes:
/// validation → 1, runtime/invariant → 2, I/O → 3.
#[derive(Debug)]
pub enum CliError {
    Validation(String),
    Runtime(String),
    Io(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Validation(_) => 1,
            CliError::Runtime(_) => 2,
            CliError::Io(_) => 3,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Validation(msg) => write!(f, "validation error: {msg}"),
            CliError::Runtime(msg) => write!(f, "runtime error: {msg}"),
            CliError::Io(msg) => write!(f, "io error: {msg}"),
        }
    }
}

impl std::error::Error for CliError {}

/// Full-precision, locale-free float formatting shared by every output file;
/// 17 significant digits round-trip any f64 exactly.
pub fn fmt_f64(x: f64) -> String {
    format!("{x:.17e}")
}
