use std::path::PathBuf;

use thiserror::Error;

/// Crate-wide error type.
#[derive(Debug, Error)]
pub enum Error {
    #[error("signal too short: {samples} samples is less than one {window_samples}-sample window")]
    SignalTooShort { samples: usize, window_samples: usize },

    #[error("frame index {index} out of range 1..={num_frames}")]
    FrameIndexOutOfRange { index: usize, num_frames: usize },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("utterance too short for constraints: no admissible onset-offset pair (T = {num_frames})")]
    NoAdmissiblePair { num_frames: usize },

    #[error("zero variance: {0}")]
    ZeroVariance(String),

    #[error("undefined correlation: {0}")]
    UndefinedCorrelation(String),

    #[error("token id mismatch: {0}")]
    IdMismatch(String),

    #[error("feature map layout mismatch: model fingerprint {expected:#018x}, current layout {got:#018x}")]
    LayoutMismatch { expected: u64, got: u64 },

    #[error("unsupported audio encoding in {path}: {detail}")]
    UnsupportedAudio { path: PathBuf, detail: String },

    #[error("malformed model file: {0}")]
    ModelFormat(String),

    #[error("manifest error: {0}")]
    Manifest(String),

    #[error("io error: {0}")]
    Io(#[from] std::io::Error),

    #[error("wav error: {0}")]
    Wav(#[from] hound::Error),

    #[error("csv error: {0}")]
    Csv(#[from] csv::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
