//! Fixed-point test problems.
//!
//! Each problem exposes the undamped map `g`; damping is applied by the
//! driver.

mod banded;
mod grid2d;
mod linear;
mod nlh;
mod plap;
mod quasilinear;
mod real_view;
mod tridiag;

pub use banded::BandedCholesky;
pub use grid2d::{Grid2d, StencilCoefficients, INNER_TOL};
pub use linear::LinearToy;
pub use nlh::{NlhParams, NonlinearHelmholtz};
pub use plap::{PLapParams, PLaplace};
pub use quasilinear::{quasilinear_beta_star, Diffusivity, Quasilinear, QuasilinearParams};
pub use real_view::{join_complex, split_complex, RealView};
pub use tridiag::solve_tridiagonal;

use thiserror::Error;

use crate::linalg::Scalar;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ProblemError {
    #[error("linear system is singular ({0})")]
    SingularSystem(String),
    #[error("input has length {found}, problem dimension is {expected}")]
    Dimension { expected: usize, found: usize },
    #[error("invalid problem parameter: {0}")]
    InvalidParams(String),
}

/// A deterministic, dimension-preserving map `g` whose fixed point is sought.
pub trait FixedPointProblem<T: Scalar>: Send + Sync {
    fn dim(&self) -> usize;

    fn apply(&self, x: &[T]) -> Result<Vec<T>, ProblemError>;

    fn description(&self) -> String;

    fn initial_guess(&self) -> Vec<T> {
        vec![T::zero(); self.dim()]
    }

    fn known_solution(&self) -> Option<Vec<T>> {
        None
    }

    /// Largest damping factor known to make the damped map contractive.
    fn beta_star(&self) -> Option<f64> {
        None
    }
}

pub(crate) fn check_len(expected: usize, found: usize) -> Result<(), ProblemError> {
    if expected != found {
        return Err(ProblemError::Dimension { expected, found });
    }
    Ok(())
}
