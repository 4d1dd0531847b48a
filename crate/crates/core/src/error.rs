use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("alphabet must contain at least one symbol")]
    EmptyAlphabet,
    #[error("symbol '{0}' appears twice in the alphabet")]
    DuplicateSymbol(char),
    #[error("symbol '{0}' is not in the alphabet")]
    UnknownSymbol(char),
    #[error("images must be non-empty words")]
    EmptyWord,
    #[error("parse error at offset {pos}: {msg}")]
    Parse { pos: usize, msg: String },
    #[error("alphabet mismatch: {0}")]
    AlphabetMismatch(String),
    #[error("morphism is not a Parikh-positive endomorphism (use cross_alphabet_decompose for non-endomorphisms)")]
    NotParikhPositive,
    #[error("search limit reached: {0}")]
    Truncated(String),
    #[error("oracle bounds do not cover the instance: {0}")]
    BoundsInsufficient(String),
    #[error("contract violation: {0}")]
    Contract(String),
    #[error("invalid matrix: {0}")]
    InvalidMatrix(String),
}

pub type Result<T> = std::result::Result<T, Error>;
