use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("{0} is not prime")]
    NotPrime(u64),

    #[error("modulus {0} exceeds 2^63")]
    ModulusTooLarge(u64),

    #[error("zero has no order")]
    ZeroHasNoOrder,

    #[error("precondition failed: {0}")]
    Precondition(String),

    #[error("{what}: size {actual} exceeds guard {limit}")]
    GuardExceeded {
        what: &'static str,
        limit: usize,
        actual: usize,
    },

    #[error("internal consistency: {0}")]
    Consistency(String),

    #[error("unknown format {0:?} (expected dot, graphml or csv)")]
    UnknownFormat(String),

    #[error("word {word:?} is not reduced; it normalises to {normalized:?}")]
    NonReducedWord { word: String, normalized: String },

    #[error("invalid word {0:?}: letters must be 1, 2 or 3")]
    InvalidWord(String),

    #[error("LT bound vacuous at this size (n = {0})")]
    VacuousLtBound(usize),

    #[error("eigensolver did not converge (residual {residual:e})")]
    NonConvergence { residual: f64 },

    #[error("target {0} is below the minimum of x / ln ln x")]
    TargetTooSmall(f64),

    #[error("parse error: {0}")]
    Parse(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
