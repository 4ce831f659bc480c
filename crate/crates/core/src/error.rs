use std::path::PathBuf;

use thiserror::Error;

/// Errors produced by reconstruction, IO and experiment orchestration.
#[derive(Debug, Error)]
pub enum FsrError {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error(
        "dimension mismatch: expected {expected_width}x{expected_height}, got {width}x{height}"
    )]
    DimensionMismatch {
        expected_width: usize,
        expected_height: usize,
        width: usize,
        height: usize,
    },

    /// The extrapolation area holds no known or reconstructed sample.
    #[error("block has no supporting samples")]
    EmptyBlock,

    #[error("sampling mask has no available samples")]
    EmptyMask,

    #[error("malformed {format} data: {reason}")]
    Format {
        format: &'static str,
        reason: String,
    },

    #[error("io error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("image decoding failed for {path}: {source}")]
    Image {
        path: PathBuf,
        #[source]
        source: image::ImageError,
    },

    #[error("csv error: {0}")]
    Csv(#[from] csv::Error),

    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
}

impl FsrError {
    pub(crate) fn param(msg: impl Into<String>) -> Self {
        FsrError::InvalidParameter(msg.into())
    }

    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        FsrError::Io {
            path: path.into(),
            source,
        }
    }
}

pub type Result<T, E = FsrError> = std::result::Result<T, E>;
