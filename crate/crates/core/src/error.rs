use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

/// First vertex (in mixed-radix order) whose neighbour count into some class
/// disagrees with the count established by the first vertex of its own class.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NotEquitable {
    pub vertex: usize,
    pub coords: Vec<u32>,
    pub vertex_class: u32,
    pub target_class: u32,
    pub expected: u32,
    pub actual: u32,
}

impl std::fmt::Display for NotEquitable {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "vertex {:?} (class {}) has {} neighbours in class {}, expected {}",
            self.coords, self.vertex_class, self.actual, self.target_class, self.expected
        )
    }
}

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid domain: {0}")]
    InvalidDomain(String),
    #[error("index capacity exceeded: {q}^{n} entries is more than 2^31")]
    CapacityExceeded { n: usize, q: u32 },
    #[error("coordinate {position} has value {value}, outside [0, {q})")]
    CoordinateOutOfRange { position: usize, value: u32, q: u32 },
    #[error("point has {actual} coordinates, domain has {expected}")]
    DimensionMismatch { expected: usize, actual: usize },
    #[error("index {index} outside [0, {size})")]
    IndexOutOfRange { index: usize, size: usize },
    #[error("operands live on different domains")]
    MismatchedParams,
    #[error("table has {actual} values, domain needs {expected}")]
    LengthMismatch { expected: usize, actual: usize },
    #[error("value {value} at index {index} is not allowed in mode {mode}")]
    InvalidValue { index: usize, value: String, mode: &'static str },
    #[error("operation needs a {expected} table, got {actual}")]
    WrongMode { expected: &'static str, actual: &'static str },
    #[error("coordinate {axis} out of range for n = {n}")]
    AxisOutOfRange { axis: usize, n: usize },
    #[error("symbols must differ (a = b = {0})")]
    EqualSymbols(u32),
    #[error("symbol {symbol} outside [0, {q})")]
    SymbolOutOfRange { symbol: u32, q: u32 },
    #[error("invalid weight window [{k}, {m}] for n = {n}")]
    InvalidWindow { k: usize, m: usize, n: usize },
    #[error("q = {0} is not supported here: the bounds need q >= 3")]
    AlphabetTooSmall(u32),
    #[error("parameter out of range: {0}")]
    OutOfRange(String),
    #[error("partition is not equitable: {0}")]
    NotEquitable(NotEquitable),
    #[error("class {0} is empty")]
    EmptyClass(u32),
    #[error("{0}")]
    Inconsistent(String),
    #[error("proven bound violated: {0}")]
    TheoremViolation(String),
    #[error("limit exceeded: {0}")]
    LimitExceeded(String),
    #[error("line {line}, column {column}: {message}")]
    Parse { line: usize, column: usize, message: String },
    #[error(transparent)]
    Io(#[from] std::io::Error),
}
