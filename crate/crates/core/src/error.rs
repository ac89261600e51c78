use std::path::PathBuf;

use thiserror::Error;

/// Errors raised by the solvers, the configuration layer and the writers.
#[derive(Debug, Error)]
pub enum Error {
    #[error("non-finite value in {what} at cell {index}")]
    NonFiniteState { what: &'static str, index: usize },

    #[error("non-physical state at cell {index}: {detail}")]
    NonPhysicalState { index: usize, detail: String },

    #[error("degenerate Riemann problem: compressibility factor {kappa} is not positive")]
    DegenerateRiemann { kappa: f64 },

    #[error("negative water depth {value} at cell {index}")]
    NegativeDepth { index: usize, value: f64 },

    #[error("exact Riemann solver did not converge after {iterations} iterations")]
    NoConvergence { iterations: usize },

    #[error("particle ordering violated between particles {index} and {next}", next = index + 1)]
    OrderingViolated { index: usize },

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("config parse error at line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("config validation error for `{key}`{}: {constraint}", line_suffix(*line))]
    Validation {
        key: String,
        line: Option<usize>,
        constraint: String,
    },

    #[error("unknown config key `{key}`{}", line_suffix(*line))]
    UnknownKey { key: String, line: Option<usize> },

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: String, found: String },

    #[error("non-finite value at index {index} in {source_name}")]
    NonFiniteValue { source_name: String, index: usize },

    #[error("I/O error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("step {step} (t = {time}): {source}")]
    Step {
        step: u64,
        time: f64,
        #[source]
        source: Box<Error>,
    },
}

fn line_suffix(line: Option<usize>) -> String {
    match line {
        Some(l) => format!(" (line {l})"),
        None => String::new(),
    }
}

/// Coarse classification used to pick a process exit code.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorKind {
    Config,
    Numerics,
    Io,
}

impl Error {
    pub fn kind(&self) -> ErrorKind {
        match self {
            Error::Parse { .. }
            | Error::Validation { .. }
            | Error::UnknownKey { .. }
            | Error::DimensionMismatch { .. }
            | Error::NonFiniteValue { .. }
            | Error::InvalidInput(_) => ErrorKind::Config,
            Error::Io { .. } => ErrorKind::Io,
            Error::Step { source, .. } => source.kind(),
            _ => ErrorKind::Numerics,
        }
    }

    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    pub(crate) fn validation(key: &str, constraint: impl Into<String>) -> Self {
        Error::Validation {
            key: key.to_string(),
            line: None,
            constraint: constraint.into(),
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
