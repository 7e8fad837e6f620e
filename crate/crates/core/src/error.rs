use thiserror::Error;

/// A parse failure at a byte offset of the input text.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("parse error at position {position}: {message}")]
pub struct ParseError {
    pub position: usize,
    pub message: String,
}

impl ParseError {
    pub fn new(position: usize, message: impl Into<String>) -> Self {
        ParseError {
            position,
            message: message.into(),
        }
    }
}

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid field: {0}")]
    InvalidField(String),
    #[error("field mismatch: {0} vs {1}")]
    FieldMismatch(String, String),
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("ambient dimension mismatch: {0} vs {1}")]
    AmbientMismatch(usize, usize),
    #[error("matrix is singular")]
    Singular,
    #[error("subspaces are not complementary")]
    NotComplementary,
    #[error("budget exceeded: need {needed}, cap {cap}")]
    BudgetExceeded { needed: u128, cap: u128 },
    #[error("multiplication table has no entry for basis pair ({0}, {1})")]
    MissingProduct(usize, usize),
    #[error("profile has {have} entries, window needs {need}")]
    ProfileTooShort { have: usize, need: usize },
    #[error("infeasible parameters: {0}")]
    Infeasible(String),
    #[error("guaranteed bound not met: {0}")]
    TheoremViolated(String),
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error("invalid input: {0}")]
    InvalidInput(String),
}

pub type Result<T> = std::result::Result<T, Error>;
