use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("total size {total} exceeds the enumeration limit {limit}")]
    LimitExceeded { total: u64, limit: u64 },

    #[error("invalid profile: {0}")]
    InvalidProfile(String),

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: String, found: String },

    #[error("internal inconsistency: {0}")]
    InternalInconsistency(String),

    #[error("hypergeometric series is ill-defined: {0}")]
    IllDefined(String),

    #[error("formula {formula} requires {required} a+b+c")]
    ParityMismatch {
        formula: &'static str,
        required: &'static str,
    },

    #[error("formula {formula} is not applicable: {reason}")]
    NotApplicable {
        formula: &'static str,
        reason: String,
    },

    #[error("arguments out of range: {0}")]
    OutOfRange(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("invalid arguments: {0}")]
    InvalidArgs(String),

    #[error("degenerate direction: {0}")]
    DegenerateDirection(String),

    #[error("no admissible (u, v, w) found: {0}")]
    NoAdmissibleSolution(String),

    #[error("unknown method `{0}`")]
    UnknownMethod(String),

    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
