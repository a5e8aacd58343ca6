use thiserror::Error;

/// Errors raised by the matrix kernel.
#[derive(Debug, Clone, Error, PartialEq)]
pub enum MatError {
    #[error("matrix is not square: {rows}x{cols}")]
    NotSquare { rows: usize, cols: usize },
    #[error("shape mismatch: {left_rows}x{left_cols} vs {right_rows}x{right_cols}")]
    ShapeMismatch {
        left_rows: usize,
        left_cols: usize,
        right_rows: usize,
        right_cols: usize,
    },
    #[error("matrix is not Hermitian (deviation {deviation:.3e}, allowed {allowed:.3e})")]
    NotHermitian { deviation: f64, allowed: f64 },
    #[error("matrix is not positive definite (lambda_min {lambda_min:.3e})")]
    NotPositiveDefinite { lambda_min: f64 },
    #[error("matrix is not positive semidefinite (lambda_min {lambda_min:.3e})")]
    NotPsd { lambda_min: f64 },
    #[error("eigensolver failed to converge after {sweeps} sweeps (off-diagonal {off:.3e})")]
    NoConvergence { sweeps: usize, off: f64 },
    #[error("non-finite entry at ({row}, {col})")]
    NonFinite { row: usize, col: usize },
}
