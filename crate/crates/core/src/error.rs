use alloc::string::String;

/// Failure modes shared by every module of the crate.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    /// A precondition on the inputs was violated.
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    /// A numerical routine did not converge or produced an out-of-tolerance result.
    #[error("numerical failure: {0}")]
    NumericalFailure(String),
    /// The request exceeds a hard resource cap (e.g. Fock-space size).
    #[error("resource limit: {0}")]
    ResourceLimit(String),
}

pub type Result<T> = core::result::Result<T, Error>;

macro_rules! invalid {
    ($($arg:tt)*) => {
        $crate::error::Error::InvalidArgument(alloc::format!($($arg)*))
    };
}

macro_rules! numerical {
    ($($arg:tt)*) => {
        $crate::error::Error::NumericalFailure(alloc::format!($($arg)*))
    };
}

pub(crate) use invalid;
pub(crate) use numerical;
