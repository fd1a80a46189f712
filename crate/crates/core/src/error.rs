use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("cannot place outliers: placed {placed} of {requested} after {attempts} attempts")]
    CannotPlaceOutliers {
        placed: usize,
        requested: usize,
        attempts: usize,
    },

    #[error("trajectory diverged at step {step}")]
    Divergent { step: usize },

    #[error("rescaling requires mu")]
    MissingMu,

    #[error("expected a {expected} distance matrix, got {found}")]
    KindMismatch { expected: String, found: String },

    #[error("only {found} admissible pairs, need at least {required}")]
    TooFewPairs { found: usize, required: usize },

    #[error("infinite distance between {0} and {1} inside the filtration range")]
    InfiniteDistance(usize, usize),

    #[error("size mismatch: {0} vs {1}")]
    SizeMismatch(usize, usize),

    #[error("diagrams computed at different thresholds ({0} vs {1})")]
    ThresholdMismatch(f64, f64),

    #[error("filtration is not sorted at position {0}")]
    UnsortedFiltration(usize),

    #[error("filtration is not face-closed: simplex at position {0} has a missing or later face")]
    NotFaceClosed(usize),

    #[error("series of length {len} too short for delay embedding spanning {span} samples")]
    SeriesTooShort { len: usize, span: usize },

    #[error("parse error on line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidParameter(msg.into())
    }
}
