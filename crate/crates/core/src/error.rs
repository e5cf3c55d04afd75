use thiserror::Error;

/// Broad failure classes, used by the command-line driver to pick exit codes.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ErrorKind {
    Usage,
    Math,
    Precision,
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    Invalid(String),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("systems do not share kind and base: {0}")]
    KindMismatch(String),
    #[error("insufficient initial data: coefficient {index} is not determined by the equation")]
    InsufficientInitialData { index: usize },
    #[error("inconsistent initial data: coefficient equation {equation} is violated")]
    InconsistentInitialData { equation: usize },
    #[error("singular point: {0}")]
    Singular(String),
    #[error("P lies in the value-relation ideal")]
    PInIdeal,
    #[error("degree bound {bound} is below the required {needed}")]
    DegreeBoundTooSmall { needed: usize, bound: usize },
    #[error("no solution: {0}")]
    NoSolution(String),
    #[error("cannot certify: {0}")]
    CannotCertify(String),
    #[error("precision exhausted: {0}")]
    PrecisionExhausted(String),
    #[error("truncation order {order} too small: {reason}")]
    TruncationTooSmall { order: usize, reason: String },
    #[error("tail bound unavailable: {0}")]
    TailBoundUnavailable(String),
}

impl Error {
    pub fn kind(&self) -> ErrorKind {
        match self {
            Error::Invalid(_) | Error::Precondition(_) | Error::DimensionMismatch { .. } | Error::KindMismatch(_) => {
                ErrorKind::Usage
            }
            Error::CannotCertify(_) | Error::PrecisionExhausted(_) | Error::TruncationTooSmall { .. } => {
                ErrorKind::Precision
            }
            _ => ErrorKind::Math,
        }
    }

    /// Short machine-readable tag.
    pub fn code(&self) -> &'static str {
        match self {
            Error::Invalid(_) => "invalid-input",
            Error::Precondition(_) => "precondition-violation",
            Error::DimensionMismatch { .. } => "dimension-mismatch",
            Error::KindMismatch(_) => "kind-mismatch",
            Error::InsufficientInitialData { .. } => "insufficient-initial-data",
            Error::InconsistentInitialData { .. } => "inconsistent-initial-data",
            Error::Singular(_) => "singular-point",
            Error::PInIdeal => "p-in-ideal",
            Error::DegreeBoundTooSmall { .. } => "degree-bound-too-small",
            Error::NoSolution(_) => "no-solution",
            Error::CannotCertify(_) => "cannot-certify",
            Error::PrecisionExhausted(_) => "precision-exhaustion",
            Error::TruncationTooSmall { .. } => "truncation-too-small",
            Error::TailBoundUnavailable(_) => "tail-bound-unavailable",
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
