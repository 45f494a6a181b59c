use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = DcaError> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum DcaError {
    #[error("invalid parameter: {0}")]
    Parameter(String),

    #[error("statistics requested over an empty region")]
    EmptyRegion,

    #[error("shape mismatch: expected {expected}, got {actual}")]
    Shape { expected: String, actual: String },

    #[error("no dark corner artifact detected: {0}")]
    NoDcaDetected(String),

    #[error("hole covers the whole image, no known pixels to fill from")]
    NoBoundary,

    #[error("empty input: {0}")]
    EmptyInput(String),

    #[error("duplicate key: {0}")]
    DuplicateKey(String),

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("{path}: {source}")]
    Image {
        path: PathBuf,
        #[source]
        source: image::ImageError,
    },

    #[error("{path}: {source}")]
    Csv {
        path: PathBuf,
        #[source]
        source: csv::Error,
    },

    #[error("{0}")]
    Data(String),
}

impl DcaError {
    pub(crate) fn param(msg: impl Into<String>) -> Self {
        DcaError::Parameter(msg.into())
    }

    pub(crate) fn shape(expected: impl ToString, actual: impl ToString) -> Self {
        DcaError::Shape {
            expected: expected.to_string(),
            actual: actual.to_string(),
        }
    }
}
