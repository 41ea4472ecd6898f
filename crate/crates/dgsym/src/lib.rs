//! Command-line front end for `dgsym-core`: file formats, run configuration and the five
//! commands `classify`, `verify`, `simulate`, `linearize` and `gauge`.
//!
//! Every command produces JSON reports (one object per line on standard output) and a short
//! human-readable summary for standard error.

// `!(x > 0.0)` is used on purpose: it also rejects NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod commands;
pub mod config;
pub mod io;

use std::process::ExitCode;

pub use config::{GridArg, RunConfig};

/// Failure modes that map to distinct exit codes.
#[derive(Debug, thiserror::Error)]
pub enum CliError {
    /// Malformed or missing input (exit code 2).
    #[error("input error: {0}")]
    Input(String),
    /// The command does not apply to the given parameters (exit code 3).
    #[error("not applicable: {0}")]
    Inapplicable(String),
    /// Writing output failed (exit code 2).
    #[error("output error: {0}")]
    Io(String),
}

impl CliError {
    /// Process exit code for this error.
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Input(_) | CliError::Io(_) => 2,
            CliError::Inapplicable(_) => 3,
        }
    }
}

impl From<dgsym_core::Error> for CliError {
    fn from(e: dgsym_core::Error) -> Self {
        match e {
            dgsym_core::Error::NotLinearizable(_) => CliError::Inapplicable(e.to_string()),
            other => CliError::Input(other.to_string()),
        }
    }
}

/// Result of a command that ran to completion.
#[derive(Debug, Default)]
pub struct Outcome {
    /// JSON reports, printed one per line.
    pub reports: Vec<serde_json::Value>,
    /// Whether every check passed.
    pub passed: bool,
    /// Lines for standard error.
    pub summary: Vec<String>,
    /// Inputs that could not be processed (batch mode keeps going past them).
    pub input_errors: usize,
}

impl Outcome {
    /// Exit code: 2 after any input error, else 0 if every check passed and 1 otherwise.
    pub fn exit_code(&self) -> ExitCode {
        if self.input_errors > 0 {
            ExitCode::from(2)
        } else if self.passed {
            ExitCode::SUCCESS
        } else {
            ExitCode::from(1)
        }
    }
}

/// JSON number that prints integers without a fractional part.
pub fn number(v: f64) -> serde_json::Value {
    if v.is_finite() && v.fract() == 0.0 && v.abs() < 9.0e15 {
        serde_json::Value::from(v as i64)
    } else {
        serde_json::Number::from_f64(v).map_or(serde_json::Value::Null, serde_json::Value::Number)
    }
}
