use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {actual}")]
    DimensionMismatch { expected: usize, actual: usize },

    #[error("dimension {dim} exceeds the dense ceiling of {max}")]
    TooLarge { dim: usize, max: usize },

    #[error("state is not normalized (norm {0})")]
    NotNormalized(f64),

    #[error("invalid subsystem selection: {0}")]
    InvalidSubsystems(String),

    #[error("not a density matrix: {0}")]
    InvalidDensityMatrix(String),

    #[error("operator is not unitary (max deviation {0:e})")]
    NotUnitary(f64),

    #[error("reduced states differ by {0:e}; the states are not related by a local unitary")]
    ReducedStatesDiffer(f64),

    #[error("noise level {0} outside [0, 0.5)")]
    InvalidNoise(f64),

    #[error("bit string length mismatch: expected {expected}, got {actual}")]
    LengthMismatch { expected: usize, actual: usize },

    #[error("invalid bit string {0:?}")]
    InvalidBits(String),

    #[error("invalid code parameters: {0}")]
    InvalidCodeParams(String),

    #[error("no ({n},{k}) code with minimum distance >= {min_d} found in {attempts} attempts")]
    CodeNotFound {
        n: usize,
        k: usize,
        min_d: usize,
        attempts: usize,
    },

    #[error("no codeword has parity 1 with the given r")]
    ParityUnattainable,

    #[error("r must be a non-zero bit string")]
    ZeroParityString,

    #[error("malformed code text: {0}")]
    CodeFormat(String),

    #[error("phase transition {from} -> {to} is not allowed")]
    PhaseOrder { from: &'static str, to: &'static str },

    #[error("invalid unitary script: {0}")]
    InvalidScript(String),

    #[error("parameter cap exceeded: {0}")]
    CapExceeded(String),

    #[error("invalid function table: {0}")]
    InvalidTable(String),

    #[error("Alice's reduced state depends on Bob's input (deviation {0:e})")]
    AliceNotIndependent(f64),

    #[error("malformed transcript log: {0}")]
    TranscriptFormat(String),
}

impl Error {
    /// Whether the error comes from a size limit rather than bad input.
    pub fn is_cap_violation(&self) -> bool {
        matches!(self, Error::CapExceeded(_) | Error::TooLarge { .. })
    }
}
