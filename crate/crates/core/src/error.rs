//! Error and result types shared across the crate.

use crate::codec::key::Domain;

/// Everything that can go wrong inside the library.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    /// A caller-supplied value is out of range or inconsistent.
    #[error("invalid input: {0}")]
    InvalidInput(String),

    /// One or more frames carry no energy in the embedding matrix, so the
    /// leading singular value is zero and no mark can be multiplied onto it.
    #[error("{domain} embedding found {} degenerate frame(s) (zero leading singular value), first at frame {}", frames.len(), frames.first().copied().unwrap_or(0))]
    DegenerateFrames { domain: Domain, frames: Vec<usize> },

    /// A key file failed validation or does not match the audio it is used on.
    #[error("invalid key: {0}")]
    InvalidKey(String),

    /// The WAV file is well formed but uses an encoding this reader does not handle.
    #[error("unsupported WAV format: {0}")]
    UnsupportedFormat(String),

    /// The file does not parse as the container it claims to be.
    #[error("corrupt file: {0}")]
    CorruptFile(String),

    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),

    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
