use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    /// A parameter lies outside the domain the operation is defined on.
    #[error("parameter out of range: {0}")]
    ParameterDomain(String),

    #[error("no marked items: the iteration count is undefined for a = 0")]
    NoSolutions,

    /// sin(2θ) = 0, i.e. the good/bad plane has collapsed (a ∈ {0, N} or p ∈ {0, 1}).
    #[error("degenerate rotation angle ({0})")]
    DegenerateAngle(&'static str),

    #[error("register of {requested} qubits exceeds the limit of {limit}")]
    SizeLimit { requested: u32, limit: u32 },

    #[error("dimension mismatch: expected {expected}, got {actual}")]
    DimensionMismatch { expected: usize, actual: usize },

    #[error("matrix is not unitary (max deviation {0:e})")]
    NonUnitary(f64),

    /// The state norm drifted far enough from 1 that the simulation can no
    /// longer be trusted.
    #[error("state norm drifted to {0}")]
    NormDrift(f64),
}
