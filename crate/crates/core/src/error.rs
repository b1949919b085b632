use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("matrix has non-finite entries")]
    NonFinite,

    #[error("matrix is not Hermitian: ||M - M^dag||_F = {residual:.3e}")]
    NotHermitian { residual: f64 },

    #[error("matrix is not positive semidefinite: min eigenvalue {min_eigenvalue:.3e}")]
    NotPositiveSemidefinite { min_eigenvalue: f64 },

    #[error("trace is {trace:.12}, expected 1")]
    NotUnitTrace { trace: f64 },

    #[error("matrix is not unitary: ||U^dag U - I||_F = {residual:.3e}")]
    NotUnitary { residual: f64 },

    #[error("unitary squared is not a phase times identity (residual {residual:.3e})")]
    NotInvolution { residual: f64 },

    #[error("group is not closed up to phase: product of elements {left} and {right} has no match (best residual {residual:.3e})")]
    NotClosed { left: usize, right: usize, residual: f64 },

    #[error("POVM is incomplete: ||sum E - I||_F = {residual:.3e}")]
    IncompletePovm { residual: f64 },

    #[error("POVM effect {index} has rank {rank}; a rank-1 effect is required")]
    NotRankOne { index: usize, rank: usize },

    #[error("bases are not mutually unbiased: max overlap deviation {deviation:.3e}")]
    NotUnbiased { deviation: f64 },

    #[error("{0} is not prime")]
    NotPrime(usize),

    #[error("Gram matrix is not positive definite")]
    NotPositiveDefinite,

    #[error("fiducial too inaccurate: Zauner residual {residual:.3e} exceeds {limit:.1e}")]
    FiducialInaccurate { residual: f64, limit: f64 },

    #[error("verification failed: {0}")]
    Verification(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidArgument(msg.into())
    }
}
