use thiserror::Error;

/// Errors shared across the crate.
#[derive(Debug, Error)]
pub enum Error {
    #[error("bitstring has Hamming weight {got}, expected {expected}")]
    InvalidWeight { got: usize, expected: usize },

    #[error("probability {value} outside [0, 1]")]
    ProbabilityOutOfRange { value: f64 },

    #[error("{what} needs {requested} qubits, guard allows {limit}")]
    ResourceGuard {
        what: &'static str,
        requested: usize,
        limit: usize,
    },

    #[error("qubit label {label} invalid for {n} qubits")]
    InvalidQubit { label: usize, n: usize },

    #[error("length mismatch: {left} vs {right}")]
    LengthMismatch { left: usize, right: usize },

    #[error("eigensolver did not converge (block weight {block_weight})")]
    Eigensolver { block_weight: usize },

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("numerical contract violated: {0}")]
    Numerical(String),

    #[error("i/o failure on {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
}

pub type Result<T> = std::result::Result<T, Error>;
