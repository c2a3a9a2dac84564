//! Batch front end: reads a run configuration, runs one analysis and writes
//! its CSV outputs plus a manifest that reproduces the run.

pub mod commands;
pub mod config;
mod output;

use std::path::PathBuf;

use gridevo::{IngestError, ParameterError};
use thiserror::Error;

pub use commands::{run, Command, Overrides};
pub use config::RunConfig;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("config: {0}")]
    Config(String),
    #[error(transparent)]
    Ingest(#[from] IngestError),
    #[error(transparent)]
    Parameter(#[from] ParameterError),
    #[error("{}: {source}", path.display())]
    Csv {
        path: PathBuf,
        #[source]
        source: csv::Error,
    },
}

impl CliError {
    /// 1 for invalid records, 2 for everything else.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Ingest(
                IngestError::Invalid(_)
                | IngestError::DanglingEndpoint { .. }
                | IngestError::Interval { .. },
            ) => 1,
            _ => 2,
        }
    }
}
