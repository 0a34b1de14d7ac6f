//! Crate-wide error type.
//!
//! Variants are grouped by how a caller should react: `Parse`,
//! `InvalidNetwork` and `InvalidFlow` are bad input; `Precondition` means
//! a routine was called on an instance outside its contract; `Budget`
//! means a brute-force solver refused an instance rather than silently
//! approximating; `Overflow` is a checked arithmetic failure on
//! adversarial capacities; `Internal` is a violated invariant and always
//! a bug.

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("invalid network: {0}")]
    InvalidNetwork(String),

    #[error("invalid flow: {0}")]
    InvalidFlow(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("budget exceeded: {0}")]
    Budget(String),

    #[error("integer overflow while computing {0}")]
    Overflow(&'static str),

    #[error("internal invariant violated: {0}")]
    Internal(String),
}

impl Error {
    pub fn parse(line: usize, msg: impl Into<String>) -> Self {
        Error::Parse { line, msg: msg.into() }
    }
}
