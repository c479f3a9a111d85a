use thiserror::Error;

/// Errors raised by state construction, measures, engines and the oracle.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("qubit index {index} out of range for {n_qubits} qubits")]
    QubitOutOfRange { index: usize, n_qubits: usize },

    #[error("qubit index {0} appears more than once")]
    DuplicateQubit(usize),

    #[error("operator of dimension {dim} does not act on {targets} target qubits")]
    ArityMismatch { dim: usize, targets: usize },

    #[error("matrix is not unitary (max deviation {deviation:e})")]
    NotUnitary { deviation: f64 },

    #[error("invalid density matrix: {0}")]
    InvalidDensity(String),

    #[error("density matrix is not positive semidefinite (eigenvalue {eigenvalue:e})")]
    NotPositive { eigenvalue: f64 },

    #[error("state is not normalized (norm² = {norm_sq})")]
    NotNormalized { norm_sq: f64 },

    #[error("structured concurrence requested for a general density matrix")]
    GeneralStructure,

    #[error("incompatible collision: {0}")]
    IncompatibleCollision(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("register of {n_qubits} qubits exceeds the oracle cap of {cap}")]
    CapExceeded { n_qubits: usize, cap: usize },
}

pub type Result<T> = std::result::Result<T, Error>;
