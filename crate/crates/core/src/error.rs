use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("matrix is not Hermitian (max deviation {deviation:e})")]
    NotHermitian { deviation: f64 },

    #[error("expectation has imaginary residue {residue:e}")]
    ImaginaryResidue { residue: f64 },

    #[error("eigensolver did not converge within {cap} sweeps")]
    EigenNoConvergence { cap: usize },

    #[error("optimizer did not reach tolerance {tol:e} within {cap} iterations")]
    OptimizerNoConvergence { tol: f64, cap: usize },

    #[error("invalid state: {0}")]
    InvalidState(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("value {value} is not a probability")]
    InvalidProbability { value: f64 },

    #[error("value {value} lies outside [-1, 1]")]
    InvalidCorrelation { value: f64 },

    #[error("qubit index {index} out of range for {num_qubits} qubits")]
    InvalidQubit { index: usize, num_qubits: usize },

    #[error("conditioning event has probability {probability:e}")]
    NullCondition { probability: f64 },

    #[error("wrong measurement setup: expected {expected}, found {found}")]
    WrongSetup { expected: String, found: String },

    #[error("missing measurement setup {0}")]
    MissingSetup(String),

    #[error("state is not the exact W state (fidelity {fidelity})")]
    NotWState { fidelity: f64 },

    #[error("empty parameter box")]
    EmptyBox,

    #[error("symbolic CHSH coefficients cannot be realized as an operator")]
    SymbolicSpec,

    #[error("target {target} outside attained range [{min}, {max}]")]
    TargetOutOfRange { target: f64, min: f64, max: f64 },
}
