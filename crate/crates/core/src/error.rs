use thiserror::Error;

/// Errors returned by the planning library.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("outside the model domain: {0}")]
    OutOfDomain(String),

    #[error("validation failed: {0}")]
    Validation(String),

    #[error("m = {given} does not match the band for D/r = {ratio}; expected m = {expected}")]
    BandMismatch { given: u32, expected: u32, ratio: f64 },

    #[error("Markov chain has no unique limit distribution: {0}")]
    NoUniqueLimit(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<()> {
    if cond {
        Ok(())
    } else {
        Err(Error::InvalidParameter(msg()))
    }
}
