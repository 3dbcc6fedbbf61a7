use thiserror::Error;

/// Errors produced anywhere in the crate.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("{0} is not a supported prime modulus (need a prime 2 <= p <= 251)")]
    NotPrime(u32),

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("index out of range: {0}")]
    IndexOutOfRange(String),

    #[error("field mismatch: {0} vs {1}")]
    FieldMismatch(u32, u32),

    #[error("input vectors are linearly dependent")]
    LinearlyDependentInput,

    #[error("enumeration budget exceeded; proven lower bound {lower_bound}")]
    BudgetExceeded { lower_bound: usize },

    #[error("change-of-basis matrix is singular")]
    SingularChange,

    #[error("invalid partition: {0}")]
    InvalidPartition(String),

    #[error("shift functions do not sum to zero")]
    NonZeroShiftSum,

    #[error("decomposition does not assemble to the zero tensor")]
    NotZero,

    #[error("one-variable functions on axis {0} are linearly dependent")]
    DependentFamilies(usize),

    #[error("decompositions do not share identical one-variable functions")]
    MismatchedOneVariableFunctions,

    #[error("decompositions assemble to different tensors")]
    DifferentTensors,

    #[error("sunflower hypotheses violated: {0}")]
    HypothesesViolated(String),

    #[error("internal contradiction: {0}")]
    InternalContradiction(String),

    #[error("dimensions too small: {0}")]
    DimsTooSmall(String),

    #[error("tensor has no decomposition of length {0}")]
    NotOfRankK(usize),

    #[error("precondition failed: {0}")]
    PreconditionFailed(String),

    #[error("format error: {0}")]
    Format(String),

    #[error("io error: {0}")]
    Io(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Format(e.to_string())
    }
}
