use alloc::string::String;

/// Errors raised by the signal-chain models.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    /// A physical quantity is outside the domain of the model (for example a
    /// non-positive temperature).
    #[error("domain error: {0}")]
    Domain(String),
    /// Malformed caller input: wrong lengths, codes out of range, mismatched grids.
    #[error("invalid input: {0}")]
    Input(String),
    /// A numerical precondition of a simulation does not hold (step size,
    /// sampling rate, sample count).
    #[error("precondition violated: {0}")]
    Precondition(String),
    /// The requested operation is not supported for this input.
    #[error("unsupported: {0}")]
    Unsupported(String),
    /// A decision could not be made (e.g. demodulating the origin).
    #[error("decision error: {0}")]
    Decision(String),
}

pub type Result<T> = core::result::Result<T, Error>;

macro_rules! ensure {
    ($cond:expr, $kind:ident, $($arg:tt)+) => {
        let ok: bool = $cond;
        if !ok {
            return Err($crate::Error::$kind(alloc::format!($($arg)+)));
        }
    };
}
pub(crate) use ensure;
