use thiserror::Error;

/// Crate-wide error type.
///
/// Every variant except [`Error::Internal`] signals a problem with caller
/// input (bad parameters, unphysical states, malformed records). `Internal`
/// is reserved for conditions that indicate a bug in the numerics.
#[derive(Debug, Error)]
pub enum Error {
    #[error("non-finite value in {context}")]
    NonFinite { context: &'static str },

    #[error("invalid state: {0}")]
    InvalidState(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("malformed tomography record: {0}")]
    MalformedRecord(String),

    #[error("internal error: {0}")]
    Internal(String),
}

impl Error {
    /// True for errors caused by caller input rather than internal bugs.
    pub fn is_validation(&self) -> bool {
        !matches!(self, Error::Internal(_))
    }
}

pub type Result<T> = std::result::Result<T, Error>;
