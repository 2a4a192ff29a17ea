use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("state is not normalized: |amp0|^2 + |amp1|^2 = {0}")]
    NotNormalized(f64),
    #[error("invalid Bloch angles: {0}")]
    InvalidAngles(String),
    #[error("lambda must be positive and finite, got {0}")]
    NonPositiveLambda(f64),
    #[error("control bound must be positive and finite, got {0}")]
    NonPositiveBound(f64),
    #[error("invalid pulse window: {0}")]
    InvalidWindow(String),
    #[error("invalid schedule: {0}")]
    InvalidSchedule(String),
    #[error("invalid integration step: {0}")]
    InvalidStep(String),
    #[error("rotation axis does not give equal projections (residual {0:e})")]
    InconsistentAxis(f64),
    #[error("fixed-drift construction needs sin(theta0)sin(phi0) != sin(theta_s)sin(phi_s)")]
    NoFixedDriftSolution,
    #[error("bound {bound} is below the required constant control |u_y| = {required}")]
    BoundInfeasible { bound: f64, required: f64 },
    #[error("matrix is not Hermitian (max deviation {0:e})")]
    NotHermitian(f64),
    #[error("matrix is not positive semidefinite")]
    NotPositiveSemidefinite,
    #[error("invalid density matrix: {0}")]
    InvalidDensityMatrix(String),
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("malformed document: {0}")]
    Document(String),
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Document(e.to_string())
    }
}
