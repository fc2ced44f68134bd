use thiserror::Error;

/// Errors raised by the simulator, the protocol engine and the verification harness.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("amplitude list has length {got}, expected {expected} for {n_qubits} qubits")]
    LengthMismatch {
        n_qubits: usize,
        expected: usize,
        got: usize,
    },

    #[error("state vector is zero")]
    ZeroVector,

    #[error("state norm {norm} deviates from 1 by more than {tolerance:e}")]
    NotNormalized { norm: f64, tolerance: f64 },

    #[error("qubit index {index} out of range for a {n_qubits}-qubit state")]
    QubitOutOfRange { index: usize, n_qubits: usize },

    #[error("qubit index {0} listed more than once")]
    DuplicateQubit(usize),

    #[error("operator is not unitary (max deviation {deviation:e})")]
    NotUnitary { deviation: f64 },

    #[error("dimension mismatch: expected {expected} qubits, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("measurement basis is not a complete orthonormal basis: {0}")]
    InvalidBasis(String),

    #[error("a GHZ outcome needs at least one label bit")]
    EmptyLabel,

    #[error("{n_agents} agents requested, the protocol needs at least 2")]
    TooFewAgents { n_agents: usize },

    #[error("{requested} qubits exceed the configured cap of {cap}")]
    QubitCapExceeded { requested: usize, cap: usize },

    #[error("{requested} branches exceed the configured enumeration cap of {cap}")]
    BranchCapExceeded { requested: u128, cap: u64 },

    #[error("protocol step out of order: {0}")]
    OutOfOrder(String),

    #[error("controller index {index} out of range 1..={max}")]
    ControllerOutOfRange { index: usize, max: usize },

    #[error("controller {0} already measured")]
    ControllerAlreadyMeasured(usize),

    #[error("selector chose outcome {index}, which has zero probability")]
    ZeroProbabilityBranch { index: usize },

    #[error("no forced outcome for {0}")]
    NoForcedOutcome(String),

    #[error("selector chose outcome {index} out of {count}")]
    SelectorOutOfRange { index: usize, count: usize },
}

pub type Result<T> = std::result::Result<T, Error>;
