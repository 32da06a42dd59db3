use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("label {raw:?} is empty after normalization")]
    EmptyLabel { raw: String },

    #[error("line {line}: malformed record: {message}")]
    Malformed { line: usize, message: String },

    #[error("line {line}: missing field `{field}`")]
    MissingField { line: usize, field: &'static str },

    #[error("line {line}: user {label:?} appears on both the in-domain and out-of-domain site")]
    DomainOverlap { line: usize, label: String },

    #[error("profiles come from different vocabularies ({left} vs {right})")]
    VocabularyMismatch { left: String, right: String },

    #[error("user {user} lists itself in its own blogroll")]
    SelfInBlogroll { user: usize },

    #[error("score {0} lies outside [0, 1]")]
    ScoreOutOfRange(f64),

    #[error("invalid {field}: {message}")]
    InvalidConfig {
        field: &'static str,
        message: String,
    },

    #[error("user populations differ: {0}")]
    PopulationMismatch(String),

    #[error("inconsistent inputs: {0}")]
    Inconsistent(String),

    #[error("{path}: {source}")]
    File {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub fn file(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::File {
            path: path.into(),
            source,
        }
    }
}
