use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("beta must be greater than 1")]
    InvalidBeta,

    #[error("digit certification failed at the precision cap of {0} bits")]
    PrecisionExhausted(u32),

    #[error("horizon must be at least 2")]
    HorizonTooSmall,

    #[error("operation needs {needed} digits but only {available} are available")]
    HorizonExceeded { needed: usize, available: usize },

    #[error("shift index {0} is beyond the stored horizon")]
    IndexBeyondHorizon(usize),

    #[error("kneading sequence failed validation: {0}")]
    InvalidKneading(String),

    #[error("tolerance cannot be certified from the stored prefix: {0}")]
    ToleranceUnreachable(String),

    #[error("word is not admissible")]
    InadmissibleWord,

    #[error("operation requires an aperiodic prefix-mode kneading sequence")]
    SoficInput,

    #[error("work budget of {0} legality tests exceeded")]
    WorkBudgetExceeded(u64),

    #[error("input ends in an all-zero tail")]
    ZeroTail,

    #[error("internal cross-check failed: {0}")]
    Verification(String),

    #[error("invalid input: {0}")]
    InvalidInput(String),
}

pub type Result<T> = std::result::Result<T, Error>;
