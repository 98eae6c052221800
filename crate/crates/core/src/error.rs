use thiserror::Error;

/// Every failure the toolkit can report.
///
/// The variant name is part of the command-line contract: the CLI prints it on
/// standard error, so renaming a variant is a breaking change.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("parameters out of range: {0}")]
    OutOfRange(String),
    #[error("exhausted {attempts} sampling attempts: {what}")]
    RetriesExhausted { what: String, attempts: usize },
    #[error("exhaustive search over {len} vectors exceeds the cap of {cap}")]
    CapExceeded { len: usize, cap: usize },
    #[error("pattern violates {property}: {detail}")]
    PatternViolation { property: &'static str, detail: String },
    #[error("no column arrangement satisfies the step preconditions: {0}")]
    RearrangeFailure(String),
    #[error("vectors do not form a basis of R^{0}")]
    NotABasis(usize),
    #[error("subspace is not phase retrievable with respect to the frame")]
    NotPRSubspace,
    #[error("support size {support} exceeds the bound {bound}")]
    SupportTooLarge { support: usize, bound: usize },
    #[error("vectors span a space of dimension {rank}, not R^{dim}")]
    NotSpanning { rank: usize, dim: usize },
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("parse error: {0}")]
    Parse(String),
}

impl Error {
    /// Stable variant name, used on the command line.
    pub fn name(&self) -> &'static str {
        match self {
            Error::OutOfRange(_) => "OutOfRange",
            Error::RetriesExhausted { .. } => "RetriesExhausted",
            Error::CapExceeded { .. } => "CapExceeded",
            Error::PatternViolation { .. } => "PatternViolation",
            Error::RearrangeFailure(_) => "RearrangeFailure",
            Error::NotABasis(_) => "NotABasis",
            Error::NotPRSubspace => "NotPRSubspace",
            Error::SupportTooLarge { .. } => "SupportTooLarge",
            Error::NotSpanning { .. } => "NotSpanning",
            Error::DimensionMismatch(_) => "DimensionMismatch",
            Error::Parse(_) => "Parse",
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
