use thiserror::Error;

/// Errors raised by the circuit engine and the game runners.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("unknown gate `{0}`")]
    UnknownGate(String),

    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error("qubit index {index} out of range for a {num_qubits}-qubit state")]
    QubitOutOfRange { index: usize, num_qubits: usize },

    #[error("qubit {0} is used both as target and as control")]
    TargetIsControl(usize),

    #[error("matrix is not unitary (max deviation {deviation:e})")]
    NotUnitary { deviation: f64 },

    #[error("state is not normalized (norm² = {norm_sqr})")]
    NotNormalized { norm_sqr: f64 },

    #[error("non-finite amplitude")]
    NonFinite,

    #[error("measurement branch has norm² {norm_sqr:e}, below the renormalization threshold")]
    DegenerateMeasurement { norm_sqr: f64 },

    #[error("expected {expected} entries, got {got}")]
    LengthMismatch { expected: usize, got: usize },

    #[error("malformed banknote record: {0}")]
    MalformedRecord(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

pub(crate) fn invalid(name: &'static str, reason: impl Into<String>) -> Error {
    Error::InvalidParameter {
        name,
        reason: reason.into(),
    }
}
