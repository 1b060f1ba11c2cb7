use thiserror::Error;

/// Errors raised by the simulation engines and protocol drivers.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum SimError {
    #[error("qudit index {index} out of range for register of size {size}")]
    IndexOutOfRange { index: usize, size: usize },
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("gate {gate} expects {expected} targets, got {found}")]
    Arity {
        gate: &'static str,
        expected: usize,
        found: usize,
    },
    #[error("repeated target qudit {0}")]
    RepeatedTarget(usize),
    #[error("gate {0} is not supported by this engine")]
    UnsupportedGate(&'static str),
    #[error("register of {qudits} qudits of dimension {dim} exceeds the dense cap of {cap} amplitudes")]
    CapExceeded { qudits: usize, dim: usize, cap: usize },
    #[error("malformed observable: {0}")]
    MalformedObservable(String),
    #[error("pair ({0}, {1}) is not in a definite Bell state")]
    NotBellPair(usize, usize),
    #[error("invalid probability distribution: {0}")]
    InvalidDistribution(String),
    #[error("matrix is not unitary (deviation {0:e})")]
    NotUnitary(f64),
    #[error("key register is stale: {0}")]
    StaleKey(String),
    #[error("register bookkeeping mismatch: {0}")]
    Bookkeeping(String),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("transcript ordering violation: {0}")]
    TranscriptOrder(String),
    #[error("ancilla pair {0} has already been consumed")]
    ConsumedAncilla(usize),
    #[error("hash identification ambiguous after {subsets} subsets")]
    HashAmbiguous { subsets: usize },
    #[error("length mismatch: expected {expected}, found {found}")]
    LengthMismatch { expected: usize, found: usize },
    #[error("parse error on line {line}: {msg}")]
    Parse { line: usize, msg: String },
}

pub type Result<T> = std::result::Result<T, SimError>;
