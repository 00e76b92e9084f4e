use std::fmt;

use thiserror::Error;

/// Position-tagged failure from the word / presentation / element parsers.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseError {
    pub line: usize,
    pub column: usize,
    pub message: String,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}: {}", self.line, self.column, self.message)
    }
}

impl std::error::Error for ParseError {}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("parse error at {0}")]
    Parse(#[from] ParseError),
    #[error("generator {index} outside rank {rank}")]
    GeneratorOutOfRange { index: u32, rank: usize },
    #[error("rank mismatch: expected {expected}, found {found}")]
    RankMismatch { expected: usize, found: usize },
    #[error("shape mismatch: expected {expected} factors, found {found}")]
    ShapeMismatch { expected: usize, found: usize },
    #[error("no image given for generator {0}")]
    MissingImage(u32),
    #[error("homomorphism is not surjective onto Z^{0}")]
    NotSurjective(usize),
    #[error("element is not in the kernel")]
    NotInKernel,
    #[error("operation needs at least {needed} factors, got {got}")]
    TooFewFactors { needed: usize, got: usize },
    #[error("index {index} out of range 1..={max}")]
    IndexOutOfRange { index: usize, max: usize },
    #[error("unknown symbol `{0}`")]
    UnknownSymbol(String),
    #[error("presentation has no faithful evaluation attached")]
    NoEvaluation,
    #[error("relator index {0} out of range")]
    BadRelatorIndex(usize),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("verification failed: {0}")]
    Verification(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
