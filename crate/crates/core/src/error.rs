use thiserror::Error;

/// Errors raised by the solver suite.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    /// A coefficient became non-finite or the L2 norm exceeded the blowup
    /// threshold.
    #[error("numerical blowup at t = {time}")]
    NumericalBlowup { time: f64 },
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::InvalidArgument(msg.into()))
}
