use thiserror::Error;

use crate::word::Word;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("alphabet must have between 1 and {max} symbols, got {size}")]
    InvalidAlphabet { size: usize, max: usize },
    #[error("alphabet mismatch: {left} vs {right} symbols")]
    AlphabetMismatch { left: usize, right: usize },
    #[error("symbol {symbol} is outside the alphabet of size {size}")]
    SymbolOutOfAlphabet { symbol: u8, size: usize },
    #[error("word {0} is not admissible")]
    NotAdmissible(Word),
    #[error("logarithm of a non-positive number")]
    NonPositiveLog,
    #[error("matrix support is not strongly connected")]
    Reducible,
    #[error("matrix is identically zero")]
    ZeroMatrix,
    #[error("invalid matrix: {0}")]
    InvalidMatrix(String),
    #[error("the shift space is empty")]
    EmptyShift,
    #[error("the language has no words of length {0}")]
    EmptyLanguage(usize),
    #[error("graph is not strongly connected")]
    NotStronglyConnected,
    #[error("labeled graph is not essential")]
    NonEssential,
    #[error("the generating set is empty")]
    EmptyGenerators,
    #[error("the empty word is not allowed here")]
    EmptyWord,
    #[error("invalid budget: {0}")]
    InvalidBudget(String),
    #[error("no membership evidence for the periodic orbit of {0}")]
    NoMembershipEvidence(Word),
    #[error("precision exhausted while deciding digit {digit} of the expansion")]
    PrecisionExhausted { digit: usize },
    #[error("generator prefix exhausted: {available} generators available, {requested} requested")]
    GeneratorsExhausted { available: usize, requested: usize },
    #[error("invalid beta: {0}")]
    InvalidBeta(String),
    #[error("no connector path for wandering word {0}")]
    NoConnector(Word),
    #[error("generated subshift is not contained in the declared language (word {0})")]
    InconsistentCodedShift(Word),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
}

impl Error {
    pub fn parse(line: usize, message: impl Into<String>) -> Self {
        Error::Parse {
            line,
            message: message.into(),
        }
    }
}
