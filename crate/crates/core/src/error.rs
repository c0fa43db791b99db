use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("shape mismatch: {0}")]
    Shape(String),

    #[error("dimension {dim} exceeds the configured maximum {max}")]
    SizeLimit { dim: usize, max: usize },

    #[error("domain error: {0}")]
    Domain(String),

    #[error("degenerate input: {0}")]
    Degenerate(String),

    #[error("incomplete phase spec: missing phase for pair ({0}, {1})")]
    IncompleteSpec(usize, usize),

    #[error("non-finite entry at position {0}")]
    NonFinite(usize),

    #[error("amplitudes are not unit modulus at indices {indices:?}")]
    NonUnitaryAmplitude { indices: Vec<usize> },

    #[error("unsupported dimension {0}: only qubits (N = 2) are supported here")]
    UnsupportedDimension(usize),

    #[error("invalid density matrix: {0}")]
    InvalidDensity(String),
}
