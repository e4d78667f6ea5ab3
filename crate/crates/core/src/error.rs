use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("matrix is not square: {rows}x{cols}")]
    NotSquare { rows: usize, cols: usize },

    #[error("shape error: {0}")]
    Shape(String),

    #[error("hermiticity violated: max entry deviation {deviation:e}")]
    NotHermitian { deviation: f64 },

    #[error("trace violated: trace is {trace} (expected 1)")]
    TraceViolation { trace: f64 },

    #[error("positivity violated: minimum eigenvalue {min_eigenvalue:e}")]
    NotPositive { min_eigenvalue: f64 },

    #[error("subsystem index {index} out of range for {parties} parties")]
    IndexOutOfRange { index: usize, parties: usize },

    #[error("invalid permutation {0:?}")]
    InvalidPermutation(Vec<usize>),

    #[error("dimension {0} outside supported range 2..=64")]
    DimensionOutOfRange(usize),

    #[error("positivity violation: operator {alpha} has minimum eigenvalue {eigenvalue:e}")]
    PositivityViolation { alpha: usize, eigenvalue: f64 },

    #[error("degenerate parameter: {0}")]
    DegenerateParameter(String),

    #[error("parameter out of range: {0}")]
    ParameterOutOfRange(String),

    #[error("search space too large: {nodes:e} leaf nodes (limit {limit:e})")]
    SearchSpaceTooLarge { nodes: f64, limit: f64 },

    #[error("enumeration too large: {count:e} injections (limit {limit})")]
    EnumerationTooLarge { count: f64, limit: u64 },

    #[error("invalid partition: {0}")]
    InvalidPartition(String),

    #[error("negative weight {0:e} in weight tensor")]
    NegativeWeight(f64),

    #[error("POVM condition violated: {0}")]
    PovmCondition(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("i/o error: {0}")]
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
        Error::Parse(e.to_string())
    }
}
