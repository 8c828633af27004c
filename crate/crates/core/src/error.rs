use thiserror::Error;

/// Errors raised by every fallible operation in the crate.
#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected} qubits, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("state is not normalized (norm^2 = {0})")]
    NotNormalized(f64),

    #[error("matrix is not unitary (||U^dag U - I||_F = {0})")]
    NotUnitary(f64),

    #[error("matrix is not Hermitian (max deviation {0})")]
    NotHermitian(f64),

    #[error("unknown gate `{0}`")]
    UnknownGate(String),

    #[error("gate `{name}` expects {expected} parameter(s) and {qubits} qubit(s)")]
    GateArity {
        name: String,
        expected: usize,
        qubits: usize,
    },

    #[error("qubit index {index} out of range for {n} qubits")]
    QubitOutOfRange { index: usize, n: usize },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("unsupported size: {0}")]
    Unsupported(String),

    #[error("numerical failure: {0}")]
    Numerical(String),

    #[error("solver did not converge: {0}")]
    NotConverged(String),

    #[error("linear program is infeasible")]
    Infeasible,

    #[error("verification failed: {0}")]
    Verification(String),

    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
