use thiserror::Error;

/// Errors raised across the library.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("alphabet size {0} out of range (need 2 <= k <= 36)")]
    BadAlphabet(u32),

    #[error("digit {digit} is not a symbol of the size-{k} alphabet")]
    InvalidDigit { digit: u32, k: u8 },

    #[error("cannot parse '{0}' as a word")]
    ParseWord(String),

    #[error("cannot parse '{0}' as a rational (expected p/q)")]
    ParseRat(String),

    #[error("grid value of the empty word is undefined")]
    EmptyWord,

    #[error("{0} is outside [0,1)")]
    OutOfUnitInterval(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("machine text line {line}: {msg}")]
    ParseMachine { line: usize, msg: String },

    #[error("Mealy machine output map is not a permutation in state(s) {0:?}")]
    NotPermutation(Vec<usize>),

    #[error("search budget of {budget} exceeded")]
    BudgetExceeded { budget: u64 },

    #[error("no closed-form value available: {0}")]
    NoClosedForm(String),

    #[error("no witness: {0}")]
    NoWitness(String),
}

pub type Result<T> = std::result::Result<T, Error>;
