use thiserror::Error;

use crate::grid::Domain;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("grid mismatch: {0}")]
    GridMismatch(String),

    #[error("expected a {expected:?} grid function, found {found:?}")]
    WrongDomain { expected: Domain, found: Domain },

    #[error("numeric range: {0}")]
    NumericRange(String),

    #[error("resolution too low: {0}")]
    Resolution(String),

    #[error("parameter out of range: {0}")]
    OutOfRange(String),

    #[error("lift parameter epsilon too large: {0}")]
    EpsilonTooLarge(String),

    #[error("missing fixture: {0}")]
    MissingFixture(String),

    #[error("format error: {0}")]
    Format(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    /// True for errors caused by bad user input rather than a failed computation.
    pub fn is_input_error(&self) -> bool {
        matches!(
            self,
            Error::InvalidInput(_)
                | Error::GridMismatch(_)
                | Error::WrongDomain { .. }
                | Error::OutOfRange(_)
                | Error::Format(_)
                | Error::Io(_)
                | Error::MissingFixture(_)
        )
    }
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Format(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
