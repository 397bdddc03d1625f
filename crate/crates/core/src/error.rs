use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

/// Errors raised by the library.
///
/// Mathematical verdicts (an identity failing, a class being obstructed) are
/// never errors; they come back as ordinary values.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Error {
    /// Malformed or inconsistent input data.
    InvalidInput(String),
    /// A shape did not match. Carries what was being checked plus the
    /// expected and actual sizes.
    DimensionMismatch { what: &'static str, expected: usize, found: usize },
    /// Entries from two different fields were combined.
    FieldMismatch,
    /// A cochain was handed to a context it was not built for.
    ContextMismatch(String),
    /// A pair offered as a 2-cocycle fails one of the two cocycle
    /// identities ("multiplicative" or "differential") at the given basis
    /// tuple.
    NotACocycle { identity: &'static str, witness: Vec<usize> },
    /// The requested degree exceeds the configured budget.
    Budget { degree: usize, max: usize },
    /// The operation is not defined for this input (e.g. the closed-form
    /// delta at weight zero).
    Unsupported(&'static str),
    /// An internal consistency check failed. Always a bug.
    Internal(String),
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::InvalidInput(msg) => write!(f, "invalid input: {msg}"),
            Error::DimensionMismatch { what, expected, found } => {
                write!(f, "dimension mismatch in {what}: expected {expected}, found {found}")
            }
            Error::FieldMismatch => write!(f, "entries from different fields"),
            Error::ContextMismatch(msg) => write!(f, "context mismatch: {msg}"),
            Error::NotACocycle { identity, witness } => {
                write!(f, "not a 2-cocycle: {identity} identity fails at basis tuple {witness:?}")
            }
            Error::Budget { degree, max } => {
                write!(f, "degree {degree} exceeds the configured budget of {max}")
            }
            Error::Unsupported(msg) => write!(f, "unsupported: {msg}"),
            Error::Internal(msg) => write!(f, "internal error: {msg}"),
        }
    }
}

impl core::error::Error for Error {}

pub(crate) fn check_dim(what: &'static str, expected: usize, found: usize) -> Result<(), Error> {
    if expected == found {
        Ok(())
    } else {
        Err(Error::DimensionMismatch { what, expected, found })
    }
}
