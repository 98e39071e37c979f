use std::path::PathBuf;

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("parse error at row {row}: {msg}")]
    Parse { row: usize, msg: String },

    #[error("integrity error: {0}")]
    Integrity(String),

    #[error("schema error: {0}")]
    Schema(String),

    #[error("resample error: {0}")]
    Resample(String),

    #[error("split error: {0}")]
    Split(String),

    #[error("empty design: {0}")]
    EmptyDesign(String),

    #[error("numeric error: {0}")]
    Numeric(String),

    #[error("missing series: {0}")]
    MissingSeries(String),

    #[error("fit error: {0}")]
    Fit(String),

    #[error("metric error: {0}")]
    Metric(String),

    #[error("config error: {0}")]
    Config(String),

    #[error("region {region}: {source}")]
    Region {
        region: String,
        #[source]
        source: Box<Error>,
    },

    #[error("experiment {id} ({stage}): {source}")]
    Experiment {
        id: String,
        stage: String,
        #[source]
        source: Box<Error>,
    },

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("serialization error: {0}")]
    Serde(String),
}

impl Error {
    pub fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    /// True for errors caused by the input data rather than the configuration.
    pub fn is_data_error(&self) -> bool {
        match self {
            Error::Parse { .. }
            | Error::Integrity(_)
            | Error::Schema(_)
            | Error::Resample(_)
            | Error::MissingSeries(_)
            | Error::Io { .. } => true,
            Error::Region { source, .. } | Error::Experiment { source, .. } => {
                source.is_data_error()
            }
            _ => false,
        }
    }
}
