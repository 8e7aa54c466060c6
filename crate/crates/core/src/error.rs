use thiserror::Error;

/// Errors raised by the simulation and analysis routines.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("unknown register `{0}`")]
    UnknownRegister(String),
    #[error("duplicate register `{0}`")]
    DuplicateRegister(String),
    #[error("invalid layout: {0}")]
    InvalidLayout(String),
    #[error("layout dimension 2^{qubits} exceeds the dense limit 2^{limit}")]
    LayoutTooLarge { qubits: usize, limit: usize },
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("matrix is not unitary (deviation {0:.3e})")]
    NotUnitary(f64),
    #[error("invalid density operator: {0}")]
    InvalidDensity(String),
    #[error("impossible outcome: projection norm {0:.3e}")]
    ImpossibleOutcome(f64),
    #[error("invalid bit string `{0}`")]
    InvalidBits(String),
    #[error("unsupported family {kind} with n = {n}")]
    UnsupportedFamily { kind: String, n: usize },
    #[error("label {0} is not a member of the family")]
    UnknownLabel(String),
    #[error("argument {0} outside the function domain")]
    InvalidArgument(String),
    #[error("oracle is not a basis permutation")]
    NotPermutation,
    #[error("invalid share: {0}")]
    InvalidShare(String),
    #[error("search budget of {0} nodes exceeded")]
    SearchBudget(usize),
    #[error("repetition cap {0} exceeded before the linear system was solvable")]
    RepetitionCap(usize),
    #[error("iterate cap {cap} reached with p_S = {best:.6}")]
    IterateCap { cap: usize, best: f64 },
    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("invalid configuration: {0}")]
    Config(String),
}

pub type Result<T> = std::result::Result<T, Error>;
