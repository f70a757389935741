use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("parse error at position {pos}: {msg}")]
    Parse { pos: usize, msg: String },
    #[error("variable index {index} out of range for {nvars} variables")]
    IndexOutOfRange { index: usize, nvars: usize },
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("coefficient ring mismatch: {0} vs {1}")]
    RingMismatch(String, String),
    #[error("chart coordinate {0} of the point is zero")]
    ChartCoordinateZero(usize),
    #[error("extraneous Macaulay minor vanishes; retry after a change of variables")]
    DegenerateMinor,
    #[error("resultant is not divisible by the normalizing power of the degree")]
    NonIntegralNormalization,
    #[error("size limit exceeded: {0}")]
    SizeLimit(String),
    #[error("enumeration budget exceeded: {0}")]
    BudgetExceeded(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("the point is not a singular point of the hypersurface")]
    NotSingular,
    #[error("zero polynomial")]
    ZeroPolynomial,
    #[error("no witness found within the search budget")]
    NotFound,
    #[error("precondition violated: {0}")]
    Precondition(String),
}
