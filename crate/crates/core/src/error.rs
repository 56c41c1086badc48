use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("division by zero")]
    DivisionByZero,

    #[error("parse error at byte {position}: {message}")]
    Parse { position: usize, message: String },

    /// Input is outside an operation's or theorem's applicability range.
    #[error("precondition violated: {0}")]
    Precondition(String),

    /// The kernel found no future event while robots were still apart.
    #[error("simulation stalled at t = {time}: {detail}")]
    Stall { time: String, detail: String },

    /// A plan invariant did not hold; indicates a generator bug.
    #[error("internal invariant violated: {0}")]
    Internal(String),
}

impl Error {
    pub(crate) fn precondition(msg: impl Into<String>) -> Self {
        Error::Precondition(msg.into())
    }

    pub(crate) fn internal(msg: impl Into<String>) -> Self {
        Error::Internal(msg.into())
    }
}
