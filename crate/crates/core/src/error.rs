use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("invalid input: {0}")]
    Input(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("metric is not positive definite")]
    NotPositiveDefinite,

    #[error("vectors do not span a plane")]
    DegeneratePlane,

    #[error("plane transformation matrix is singular")]
    SingularTransform,

    #[error("drift norm must be strictly below 1 (squared norm is {norm_squared})")]
    NormBound { norm_squared: String },

    #[error("the fundamental tensor is undefined at the zero direction")]
    ZeroDirection,

    #[error("drift is not parallel: only Berwald-type Randers metrics are supported")]
    NonBerwald,

    #[error("catalog case {0} does not exist (valid ids are 1..=6)")]
    CaseOutOfRange(u32),

    #[error("catalog case {0} takes no parameters")]
    UnexpectedParams(u32),

    #[error("catalog case {0} requires parameters alpha and beta")]
    MissingParams(u32),
}

impl Error {
    /// Violations of a mathematical precondition, as opposed to malformed input.
    pub fn is_precondition(&self) -> bool {
        matches!(
            self,
            Error::NormBound { .. }
                | Error::DegeneratePlane
                | Error::NonBerwald
                | Error::ZeroDirection
        )
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
