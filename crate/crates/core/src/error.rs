use std::path::PathBuf;

use thiserror::Error;

use crate::bandit::ArmId;
use crate::contextual::ContextIndex;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    /// A ground-truth cell (context, arm) has no success probability.
    #[error("no success probability for context {context}, arm {arm}")]
    MissingCell { context: ContextIndex, arm: ArmId },

    #[error("column `{column}` not found in CSV header")]
    Schema { column: String },

    #[error("unmapped value {value:?} in column `{column}` at row {row}")]
    Value {
        column: String,
        value: String,
        row: usize,
    },

    #[error("missing value in column `{column}` at row {row}")]
    MissingField { column: String, row: usize },

    #[error("random-policy final value is zero for run {run}; ratio undefined")]
    DegenerateBaseline { run: usize },

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidArgument(msg.into())
    }

    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}
