//! Dense kernels over real and complex fields: Householder economy QR,
//! triangular solves, one-sided Jacobi SVD, condition numbers and direction
//! sines.

mod matrix;
mod qr;
mod scalar;
mod svd;

pub use matrix::Matrix;
pub use qr::{
    back_substitute, direction_sines, economy_qr, frobenius_cond, frobenius_cond_from_r,
    least_squares_solve, triangular_inverse, QrFactors, SINGULAR_R_RATIO,
};
pub(crate) use qr::householder_qr;
pub use scalar::{axpy, dot, norm2, sub, Scalar};
pub use svd::{small_svd, SvdFactors, JACOBI_TOL, SWEEPS_PER_COLUMN};

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum LinalgError {
    #[error("column {column} is exactly dependent on the preceding columns")]
    NumericalBreakdown { column: usize },
    #[error("triangular factor is singular at diagonal index {index}")]
    SingularR { index: usize },
    #[error("Jacobi SVD did not converge within {sweeps} sweeps")]
    NoConvergence { sweeps: usize },
    #[error("unsupported shape {rows} x {cols}")]
    Shape { rows: usize, cols: usize },
    #[error("dimension mismatch: expected {expected}, found {found}")]
    Dimension { expected: usize, found: usize },
    #[error("non-finite input entry")]
    NonFinite,
}
