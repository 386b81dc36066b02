//! Error type shared by all modules of the crate.

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;

/// Errors raised by construction, analysis and simulation routines.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("invalid protomatrix: {0}")]
    InvalidProtomatrix(String),

    #[error("invalid family: {0}")]
    InvalidFamily(String),

    #[error("rate index {m} out of range, family has {available} extension rows")]
    RateIndexOutOfRange { m: usize, available: usize },

    #[error("rate {0} outside (0, 1)")]
    RateOutOfRange(String),

    #[error("negative SNR argument {0}")]
    NegativeSnr(f64),

    #[error("threshold bracket failure: {0}")]
    BracketFailure(String),

    #[error("empty candidate space under the extension policy")]
    EmptyCandidateSpace,

    #[error("invalid lift: {0}")]
    InvalidLift(String),

    #[error("shift assignment restart limit of {0} exceeded")]
    RestartLimitExceeded(usize),

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("singular precode parity submatrix (rank deficit {0})")]
    SingularPrecode(usize),

    #[error("non-finite LLR at position {0}")]
    NonFiniteLlr(usize),

    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub(crate) fn parse(line: usize, msg: impl Into<String>) -> Self {
        Error::Parse {
            line,
            msg: msg.into(),
        }
    }
}
