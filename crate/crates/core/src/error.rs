use thiserror::Error;

/// Errors raised by the dual-number routines.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("not invertible: {0}")]
    NotInvertible(String),
    #[error("dual number {0} has no square root (standard part must be positive)")]
    NoSquareRoot(String),
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },
    #[error("matrix is not symmetric (residual {residual:e})")]
    NotSymmetric { residual: f64 },
    #[error("matrix is not skew-symmetric (residual {residual:e})")]
    NotSkewSymmetric { residual: f64 },
    #[error("matrix is not Hermitian (residual {residual:e})")]
    NotHermitian { residual: f64 },
    #[error("degenerate input: {0}")]
    DegenerateInput(String),
    #[error("input vectors are not orthonormal (residual {residual:e})")]
    NotOrthonormal { residual: f64 },
    #[error("transform has a pole: {0}")]
    PoleAt(String),
    #[error("pseudoinverse failed verification of Penrose identity {identity} (residual {residual:e})")]
    PenroseViolation { identity: usize, residual: f64 },
}

pub type Result<T> = std::result::Result<T, Error>;
