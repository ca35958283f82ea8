use std::path::PathBuf;

/// Errors raised by the pipeline stages.
#[derive(thiserror::Error, Debug)]
pub enum Error {
    #[error("unknown wavelet: {0}")]
    UnknownWavelet(String),

    #[error("signal of length {len} cannot be extended in {mode} mode")]
    DegenerateSignal { len: usize, mode: &'static str },

    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),

    #[error("plane has no samples")]
    EmptyPlane,

    #[error("expected {expected} channel(s), got {actual}")]
    ChannelMismatch { expected: usize, actual: usize },

    #[error("gaussian sigma must be positive and finite, got {0}")]
    InvalidSigma(f64),

    #[error("radius must be at least 1, got {0}")]
    InvalidRadius(usize),

    #[error("shift ({dx}, {dy}) does not fit a {width}x{height} image")]
    ShiftTooLarge {
        dx: i64,
        dy: i64,
        width: usize,
        height: usize,
    },

    #[error("landmark hull has zero area")]
    DegenerateHull,

    #[error("landmark ({x}, {y}) lies outside a {width}x{height} image")]
    LandmarkOutOfBounds {
        x: f64,
        y: f64,
        width: usize,
        height: usize,
    },

    #[error("need at least {min} landmarks, got {actual}")]
    TooFewLandmarks { min: usize, actual: usize },

    #[error("image of {height}x{width} is too small (minimum {min}x{min})")]
    ImageTooSmall {
        height: usize,
        width: usize,
        min: usize,
    },

    #[error("batch is empty")]
    EmptyBatch,

    #[error("training data contains a single class")]
    SingleClassData,

    #[error("dimension mismatch: expected {expected}, got {actual}")]
    DimensionMismatch { expected: usize, actual: usize },

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("schema violation: {0}")]
    Schema(String),

    #[error("unsupported PNG format in {path}: {detail}")]
    UnsupportedPngFormat { path: PathBuf, detail: String },

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}
