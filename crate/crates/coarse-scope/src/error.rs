use thiserror::Error;

/// Crate-wide error type. Variants mirror the failure modes of the public
/// operations; everything else is total on valid input.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("matrix for letter `{letter}` is singular")]
    SingularMatrix { letter: String },
    #[error("dimension mismatch: {context}")]
    DimensionMismatch { context: String },
    #[error("duplicate or reserved name `{name}`")]
    DuplicateName { name: String },
    #[error("unknown token `{token}`")]
    UnknownToken { token: String },
    #[error("malformed vector literal `{text}`")]
    MalformedVector { text: String },
    #[error("exponent {exponent} exceeds limit {limit}")]
    ExponentOutOfRange { exponent: i64, limit: i64 },
    #[error("elements belong to different presentations")]
    PresentationMismatch,
    #[error("budget exceeded: {used} {unit} (limit {limit})")]
    BudgetExceeded {
        used: usize,
        limit: usize,
        unit: &'static str,
    },
    #[error("height is defined only for rank-1 fibres (rank here is {rank})")]
    RankNotOne { rank: usize },
    #[error("invalid presentation document: {reason}")]
    BadDocument { reason: String },
    #[error("invalid invocation: {reason}")]
    BadInvocation { reason: String },
}

pub type Result<T> = std::result::Result<T, Error>;
