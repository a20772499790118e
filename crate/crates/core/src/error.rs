use thiserror::Error;

/// Errors raised anywhere in the decoding engine or the interface simulator.
#[derive(Debug, Error)]
pub enum Error {
    #[error("not a trial container")]
    NotTrialContainer,
    #[error("corrupt container: {0}")]
    CorruptContainer(String),
    #[error("invalid samples")]
    InvalidSamples,
    #[error("configuration error: {0}")]
    Config(String),
    #[error("trial too short: window {window} exceeds {samples} samples")]
    TrialTooShort { window: usize, samples: usize },
    #[error("matrix not positive-definite")]
    NotPositiveDefinite,
    #[error("mean iteration diverged after {0} iterations")]
    MeanDiverged(usize),
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("insufficient samples for stratification: class {class} has {count} < {folds} members")]
    InsufficientStratification {
        class: usize,
        count: usize,
        folds: usize,
    },
    #[error("training diverged")]
    TrainingDiverged,
    #[error("cannot split a 1x1 rectangle")]
    CannotSplit,
    #[error("empty test pool")]
    EmptyTestPool,
    #[error("unknown session {0}")]
    UnknownSession(String),
    #[error("malformed message: {0}")]
    Protocol(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Csv(#[from] csv::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

pub(crate) fn dim_check(expected: usize, got: usize) -> Result<()> {
    if expected == got {
        Ok(())
    } else {
        Err(Error::DimensionMismatch { expected, got })
    }
}
