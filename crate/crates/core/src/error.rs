use thiserror::Error;

/// Errors raised by construction and certification routines.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    Dimension(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    /// A combinatorial object failed its defining conditions.
    #[error("verification failed: {0}")]
    Verification(String),

    /// Difference counts were not constant on the expected region.
    #[error("element {element} has {count} difference representations, expected {expected}")]
    NonConstantDifferences {
        element: String,
        count: usize,
        expected: usize,
    },

    /// A constructed or loaded frame did not pass a numerical check.
    #[error("certification failed: {0}")]
    Certification(String),

    #[error("search guard exceeded: {0}")]
    Guard(String),

    #[error("malformed input: {0}")]
    Parse(String),
}

impl Error {
    /// True for errors that signal a failed check on well-formed input, as
    /// opposed to bad parameters or malformed data.
    pub fn is_certification_failure(&self) -> bool {
        matches!(
            self,
            Error::Verification(_) | Error::NonConstantDifferences { .. } | Error::Certification(_)
        )
    }
}

pub type Result<T> = std::result::Result<T, Error>;
