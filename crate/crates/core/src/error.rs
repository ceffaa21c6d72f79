use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("operator is not Hermitian (max |A - A^H| = {deviation:e})")]
    NotHermitian { deviation: f64 },

    #[error("dimension mismatch: expected {expected}, got {actual}")]
    DimensionMismatch { expected: usize, actual: usize },

    #[error("tensor product dimension {dim} exceeds the limit of {limit}")]
    DimensionOverflow { dim: usize, limit: usize },

    #[error("truncation n_max = {n_max} is insufficient (defect {defect:e})")]
    TruncationInsufficient { n_max: usize, defect: f64 },

    #[error("truncation infeasible at lambda = {lambda}: levels not converged below n_max = {cap}")]
    TruncationInfeasible { lambda: f64, cap: usize },

    #[error("invalid density matrix: {0}")]
    InvalidState(String),

    #[error("eigendecomposition failed: {0}")]
    Eigen(String),

    #[error("phase-space grid too small: captured mass {mass:.4}")]
    GridTooSmall { mass: f64 },

    #[error("Wigner normalization drift {drift:.3e}; retry with n_max >= {suggested_n_max}")]
    NormalizationDrift { drift: f64, suggested_n_max: usize },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
