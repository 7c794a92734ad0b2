use std::io;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid topology: {0}")]
    InvalidTopology(String),

    #[error("non-positive limit: {0}")]
    NonPositiveLimit(String),

    #[error("negative parameter: {0}")]
    NegativeParameter(String),

    #[error("bad popularity mode: {0}")]
    BadPopularityMode(String),

    #[error("index {index} out of range (len {len})")]
    IndexOutOfRange { index: usize, len: usize },

    #[error("length mismatch: expected {expected}, got {actual}")]
    LengthMismatch { expected: usize, actual: usize },

    #[error("update constraint violated at rsu {rsu}: {reason}")]
    ConstraintViolation { rsu: usize, reason: String },

    #[error("discount {0} outside [0, 1)")]
    BadDiscount(f64),

    #[error("epsilon {0} must be positive")]
    BadEpsilon(f64),

    #[error("state space cap {cap} below AoI limit {max_aoi}")]
    BadStateSpace { cap: u32, max_aoi: u32 },

    #[error("no solved policy for rsu {rsu}, content {content}")]
    MissingPolicy { rsu: usize, content: usize },

    #[error("policy kind `{0}` is not handled here")]
    UnknownKind(String),

    #[error("period {0} must be at least 1")]
    BadPeriod(u64),

    #[error("arrivals {0} must be nonnegative")]
    NegativeArrivals(f64),

    #[error("content {content} is outside the coverage of rsu {rsu}")]
    OutOfCoverage { rsu: usize, content: usize },

    #[error("cannot summarize an empty trace")]
    EmptyTraces,

    #[error("config parse error: {0}")]
    Parse(#[from] serde_json::Error),

    #[error("csv error: {0}")]
    Csv(#[from] csv::Error),

    #[error("i/o failure: {0}")]
    Io(#[from] io::Error),
}

impl Error {
    /// True for errors caused by a bad experiment description rather than
    /// the environment.
    pub fn is_config_error(&self) -> bool {
        !matches!(self, Error::Io(_) | Error::Csv(_))
    }
}
