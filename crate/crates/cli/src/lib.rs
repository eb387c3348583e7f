//! File formats, parallel drivers and the command-line front end for
//! `sphere-rigidity-core`.

pub mod commands;
pub mod json;
pub mod parallel;

pub use commands::{Command, Outcome, RunConfig};

/// Overrides the built-in default size cap of every command.
pub const CAP_ENV: &str = "SPHERE_RIGIDITY_CAP";

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("malformed input: {0}")]
    Malformed(String),
    #[error("{0}")]
    Core(#[from] sphere_rigidity_core::Error),
    #[error("cannot read {path}: {source}")]
    Io { path: String, source: std::io::Error },
    #[error("invalid JSON: {0}")]
    Json(#[from] serde_json::Error),
}

impl CliError {
    /// Every error surfaced through this type is a usage or input problem.
    pub fn exit_code(&self) -> i32 {
        2
    }
}
