use thiserror::Error;

/// Errors produced anywhere in the toolkit.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("modulus {0} is not a prime in [2, 65536)")]
    NonPrimeModulus(u64),
    #[error("unsupported field kind `{0}`")]
    UnsupportedKind(String),
    #[error("division by zero")]
    DivisionByZero,
    #[error("field mismatch: {0} vs {1}")]
    FieldMismatch(String, String),
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("matrix is singular")]
    SingularMatrix,
    #[error("parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("algebra violates the left Leibniz identity at basis triple ({0}, {1}, {2})")]
    NotLeibniz(usize, usize, usize),
    #[error("operation requires a finite (prime) field")]
    InfiniteFieldUnsupported,
    #[error("dimension {dim} exceeds the enumeration guard {limit}")]
    DimensionGuard { dim: usize, limit: usize },
    #[error("field size {p} exceeds the lattice guard {limit}")]
    FieldGuard { p: u32, limit: u32 },
    #[error("subspace is not a two-sided ideal")]
    NotAnIdeal,
    #[error("malformed family spec: {0}")]
    MalformedSpec(String),
    #[error("family {0} requires characteristic 2")]
    WrongCharacteristic(String),
    #[error("parameter sweep over an infinite field needs explicit tuples")]
    InfiniteFieldSweep,
    #[error("simplicity test unsupported for {0}")]
    UnsupportedFieldDim(String),
    #[error("orbit budget exceeded: |GL({dim}, {q})| = {size}")]
    OrbitBudgetExceeded { dim: usize, q: u32, size: u64 },
    #[error("census budget exceeded for dim {dim} over GF({q})")]
    BudgetExceeded { dim: usize, q: u32 },
    #[error("io error: {0}")]
    Io(String),
    #[error("schema error at line {line}: {message}")]
    Schema { line: usize, message: String },
}

pub type Result<T> = std::result::Result<T, Error>;

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}
