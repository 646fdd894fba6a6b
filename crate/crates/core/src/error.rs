use thiserror::Error;

/// Errors raised by state construction, bound evaluation, optimisation and
/// circuit synthesis.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("matrix is not square: {rows}x{cols}")]
    NotSquare { rows: usize, cols: usize },

    #[error("matrix has zero dimension")]
    EmptyMatrix,

    #[error("matrix is not Hermitian (max |A - A^dagger| = {0:e})")]
    NotHermitian(f64),

    #[error("matrix is not positive semidefinite (min eigenvalue {0:e})")]
    NotPositive(f64),

    #[error("trace is {0}, expected 1")]
    BadTrace(f64),

    #[error("state vector has norm {0}, expected 1")]
    NotNormalized(f64),

    #[error("angle {value} outside [{min}, {max}]")]
    AngleOutOfRange { value: f64, min: f64, max: f64 },

    #[error("tensor power dimension {requested} exceeds cap {cap}")]
    DimensionCapExceeded { requested: usize, cap: usize },

    #[error("dimension mismatch: {0} vs {1}")]
    DimensionMismatch(usize, usize),

    #[error("Kraus operators are incomplete (max |sum K^dagger K - I| = {0:e})")]
    IncompleteKraus(f64),

    #[error("invalid scenario: {0}")]
    InvalidScenario(String),

    #[error("states {0} and {1} have identical ideal outputs; relative error undefined")]
    DegeneratePair(usize, usize),

    #[error("invalid probabilities: {0}")]
    BadProbabilities(String),

    #[error("vertex enumeration supports at most {max} states, got {got}")]
    TooManyStates { got: usize, max: usize },

    #[error("invalid program: {0}")]
    InvalidProgram(String),

    #[error("theta1 = {theta1} exceeds target angle {alpha_target}")]
    AngleOrderViolation { theta1: f64, alpha_target: f64 },

    #[error("ancilla overlap cos2theta = {ancilla_overlap} does not exceed f^M = {threshold}; perfect cloning is possible")]
    PerfectCloningRegime { ancilla_overlap: f64, threshold: f64 },

    #[error("invalid copy counts: N = {originals}, L = {copies} (need 1 <= N < L)")]
    BadCounts { originals: usize, copies: usize },

    #[error("register of {qubits} qubits exceeds the statevector cap of {cap}")]
    RegisterTooLarge { qubits: usize, cap: usize },

    #[error("gate is not unitary (max |U^dagger U - I| = {0:e})")]
    NotUnitary(f64),

    #[error("invalid gate targets {targets:?} on a {qubits}-qubit register")]
    BadTargets { targets: Vec<usize>, qubits: usize },

    #[error("invalid tolerance setting: {0}")]
    BadTolerance(String),
}

pub type Result<T> = std::result::Result<T, Error>;
