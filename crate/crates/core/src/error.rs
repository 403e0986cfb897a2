use thiserror::Error;

/// Errors raised by state construction, sampling, estimation and inversion.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid state: {0}")]
    InvalidState(String),

    #[error("invalid observable: {0}")]
    InvalidObservable(String),

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("{what} with {n} qubits exceeds the cap of {max}")]
    CapExceeded { what: &'static str, n: usize, max: usize },

    #[error("invalid partition: {0}")]
    InvalidPartition(String),

    #[error("order {k} outside the supported range {min}..={max}")]
    OrderOutOfRange { k: usize, min: usize, max: usize },

    #[error("operator is not Hermitian (residue {0:.3e})")]
    NonHermitian(f64),

    #[error("probabilities do not normalize (residue {0:.3e})")]
    Normalization(f64),

    #[error("signed estimator requires Bell-parity signs")]
    MissingSigns,

    #[error("missing inputs: {0}")]
    MissingInputs(String),

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("denominator {value:.3e} is below the floor {floor:.3e}")]
    BelowFloor { value: f64, floor: f64 },

    #[error("eigendecomposition failed")]
    Eigen,
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
