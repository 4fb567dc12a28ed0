use std::path::PathBuf;

use thiserror::Error;

use crate::corpus::Label;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("failed to access {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("malformed record on line {line}: {reason}")]
    MalformedRecord { line: usize, reason: String },

    #[error("duplicate user id `{0}`")]
    DuplicateUser(String),

    #[error("corpus contains no usable users")]
    EmptyCorpus,

    #[error("malformed resource {name} line {line}: {reason}")]
    Resource { name: String, line: usize, reason: String },

    #[error("invalid probability distribution: {0}")]
    InvalidDistribution(String),

    #[error("no depressed training user contains a sentiment lexicon term")]
    EmptyVocab,

    #[error("feature schema mismatch: expected {expected}, found {found}")]
    SchemaMismatch { expected: String, found: String },

    #[error("training data contains a single class")]
    SingleClass,

    #[error("solver did not converge within {cap} iterations (reached {iterations})")]
    NonConvergence { iterations: usize, cap: usize },

    #[error("length mismatch: {left} vs {right}")]
    LengthMismatch { left: usize, right: usize },

    #[error("ROC/AUC needs both classes among the labels")]
    OneClassOnly,

    #[error("class {class} has only {count} example(s); need at least 2")]
    TooFewExamples { class: Label, count: usize },

    #[error("invalid parameters: {0}")]
    InvalidParams(String),

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("model serialization failed: {0}")]
    Serialization(#[from] serde_json::Error),

    #[error("report output failed: {0}")]
    Csv(#[from] csv::Error),
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}
