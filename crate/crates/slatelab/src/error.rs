use thiserror::Error;

/// Errors surfaced by the simulator, optimizers and harness.
#[derive(Debug, Error)]
pub enum SlateError {
    #[error("invalid parameter: {0}")]
    InvalidParam(String),

    #[error("all choice scores are zero; the choice distribution is undefined")]
    DegenerateChoice,

    #[error("malformed probability distribution: {0}")]
    BadDistribution(String),

    #[error("need at least {need} items, got {got}")]
    TooFewItems { need: usize, got: usize },

    #[error("enumeration budget exceeded: C({m}, {k}) subsets > {limit}")]
    EnumerationBudget { m: usize, k: usize, limit: u64 },

    #[error("operation on a terminated user session")]
    TerminatedUser,

    #[error("feature dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("non-finite training target: {0}")]
    NonFiniteTarget(f64),

    #[error("config error: {0}")]
    Config(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}
