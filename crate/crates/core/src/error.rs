use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("orders are over different alphabets: {left} vs {right}")]
    AlphabetMismatch { left: String, right: String },

    #[error("invalid alphabet: {0}")]
    InvalidAlphabet(String),

    #[error("invalid order {order:?}: {reason}")]
    InvalidOrder { order: String, reason: String },

    #[error("constituent {0:?} is not in the alphabet")]
    UnknownConstituent(char),

    #[error("operation requires {expected} constituents, got {found}")]
    UnsupportedArity { expected: usize, found: usize },

    #[error("size {size} outside supported range {min}..={max} for {what}")]
    Size {
        what: &'static str,
        size: usize,
        min: usize,
        max: usize,
    },

    #[error("invalid input: {0}")]
    Input(String),

    #[error("line {line}: {message}")]
    Parse { line: u64, message: String },

    #[error("validation failed: {0}")]
    Validation(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
