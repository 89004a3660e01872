//! Batch front-end: configuration, report generation, sweeps, and the built-in
//! verification suite behind the `tdmetric` binary.

mod config;
mod output;
mod report;
mod run;
mod sweep;
mod verify;

pub use config::{load_config, parse_config, Emit, RunConfig, ScenarioRef};
pub use report::{ModeReport, RunReport, SCHEMA_VERSION, TOOL_VERSION};
pub use run::{resolve_scenario, run, run_with_timer};
pub use sweep::{sweep, SweepRow};
pub use verify::{verify, CheckResult, VerifyReport};

use std::path::PathBuf;

use thiserror::Error;

use crate::model::UnknownParameter;

/// Process exit codes.
pub mod exit {
    pub const SUCCESS: i32 = 0;
    pub const OPERATIONAL_ERROR: i32 = 1;
    pub const INCONSISTENT: i32 = 2;
}

#[derive(Debug, Error)]
pub enum AppError {
    #[error("parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("validation error: {0}")]
    Validation(String),
    #[error("scenario not found: `{0}`")]
    NotFound(String),
    #[error(transparent)]
    UnknownParameter(#[from] UnknownParameter),
    #[error("i/o error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error(transparent)]
    Numerical(#[from] crate::error::Error),
    #[error("serialization failed: {0}")]
    Serialize(#[from] serde_json::Error),
}

impl AppError {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Self::Io {
            path: path.into(),
            source,
        }
    }
}
