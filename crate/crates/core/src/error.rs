//! Crate-wide error type.

use thiserror::Error;

/// Convenience alias used across the crate.
pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    /// A physical or numeric precondition was violated.
    #[error("domain error: {0}")]
    Domain(String),

    /// Geometry failed validation.
    #[error("invalid geometry: {0}")]
    Geometry(String),

    /// No characteristic-equation root inside the scan range.
    #[error("no root found: {0}")]
    NoRoot(String),

    /// Bad frequency sweep definition.
    #[error("invalid sweep: {0}")]
    Sweep(String),

    /// Touchstone file could not be parsed.
    #[error("touchstone parse error at line {line}: {message}")]
    TouchstoneParse { line: usize, message: String },

    /// Touchstone document cannot be written as requested.
    #[error("touchstone: {0}")]
    Touchstone(String),

    /// TDR transform preconditions not met.
    #[error("tdr: {0}")]
    Tdr(String),

    /// Design spec is self-consistent but has no solution.
    #[error("infeasible design: {0}")]
    Infeasible(String),

    /// Design spec is malformed.
    #[error("invalid design spec: {0}")]
    DesignSpec(String),

    /// Configuration file problem (schema, unknown keys, bad values).
    #[error("config error: {0}")]
    Config(String),

    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),

    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
}

impl Error {
    /// Process exit code the CLI maps this error to.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Io(_) => 3,
            Error::Infeasible(_) => 4,
            _ => 2,
        }
    }
}
