//! Manifest-driven front end: load a groupoid, a twist, bundles and loops from JSON, run
//! validations and computations, and print deterministic tables.

pub mod checks;
pub mod commands;
pub mod manifest;
pub mod table;

pub use commands::{run, Command, Options};
pub use manifest::{load, Manifest, Model};
pub use table::{Row, Table};

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("cannot read {path}: {source}")]
    Io { path: String, source: std::io::Error },
    #[error("malformed manifest: {0}")]
    Json(#[from] serde_json::Error),
    #[error("{0}")]
    Parse(String),
    #[error("invalid seed `{0}`")]
    Seed(String),
    #[error("computation failed: {0}")]
    Compute(String),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Compute(_) => 3,
            _ => 1,
        }
    }
}

/// Outcome of a command: the table and the exit code it maps to.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub table: Table,
    pub code: u8,
}

pub const EXIT_OK: u8 = 0;
pub const EXIT_USAGE: u8 = 1;
pub const EXIT_INVALID: u8 = 2;
pub const EXIT_MISMATCH: u8 = 3;
