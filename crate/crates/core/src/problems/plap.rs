use std::f64::consts::PI;

use super::grid2d::{Grid2d, StencilCoefficients};
use super::{check_len, FixedPointProblem, ProblemError};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PLapParams {
    pub p: f64,
    /// Regularization `eps` in `(eps^2 + |grad u|^2 / 2)^{(p-2)/2}`.
    pub eps: f64,
    pub forcing: f64,
    pub subdivisions: usize,
}

impl Default for PLapParams {
    fn default() -> Self {
        Self {
            p: 1.04,
            eps: 1e-14,
            forcing: PI,
            subdivisions: 64,
        }
    }
}

/// Picard map for the regularized p-Laplacian on `(0, 2)^2`.
///
/// The update solves `-div(a(u) grad w) = f + div(a(u) grad u)` with
/// `a(u) = (eps^2 + |grad u|^2 / 2)^{(p-2)/2}`, so `g(u) = u + w`. The
/// variable-coefficient system is refactored on every call.
#[derive(Debug, Clone)]
pub struct PLaplace {
    params: PLapParams,
    grid: Grid2d,
    rhs: Vec<f64>,
}

impl PLaplace {
    pub const DOMAIN_LENGTH: f64 = 2.0;

    pub fn new(params: PLapParams) -> Result<Self, ProblemError> {
        if !(params.p > 1.0 && params.p <= 2.0) {
            return Err(ProblemError::InvalidParams(format!(
                "p must lie in (1, 2], got {}",
                params.p
            )));
        }
        if !(params.eps > 0.0) {
            return Err(ProblemError::InvalidParams("eps must be positive".into()));
        }
        let grid = Grid2d::new(params.subdivisions, Self::DOMAIN_LENGTH)?;
        let rhs = vec![params.forcing; grid.dim()];
        Ok(Self { params, grid, rhs })
    }

    pub fn params(&self) -> &PLapParams {
        &self.params
    }

    pub fn grid(&self) -> &Grid2d {
        &self.grid
    }

    pub fn coefficients(&self, u: &[f64]) -> StencilCoefficients {
        let PLapParams { p, eps, .. } = self.params;
        self.grid
            .edge_coefficients(u, |s| (eps * eps + 0.5 * s * s).powf(0.5 * (p - 2.0)))
    }

    /// The Picard correction `w(u)`.
    pub fn update(&self, u: &[f64]) -> Result<Vec<f64>, ProblemError> {
        check_len(self.grid.dim(), u.len())?;
        let coeffs = self.coefficients(u);
        let chol = self.grid.factor(&coeffs)?;
        let flux = self.grid.apply_operator(&coeffs, u);
        let r: Vec<f64> = self.rhs.iter().zip(&flux).map(|(f, a)| f - a).collect();
        self.grid.solve(&chol, &coeffs, &r)
    }
}

impl FixedPointProblem<f64> for PLaplace {
    fn dim(&self) -> usize {
        self.grid.dim()
    }

    fn apply(&self, u: &[f64]) -> Result<Vec<f64>, ProblemError> {
        let w = self.update(u)?;
        Ok(u.iter().zip(w).map(|(a, b)| a + b).collect())
    }

    fn description(&self) -> String {
        format!(
            "p-Laplace, p = {}, eps = {:e}, f = {}, {}x{} grid",
            self.params.p,
            self.params.eps,
            self.params.forcing,
            self.params.subdivisions,
            self.params.subdivisions
        )
    }

    /// `xy(x-1)(y-1)(x-2)(y-2)` at the interior nodes.
    fn initial_guess(&self) -> Vec<f64> {
        self.grid
            .sample(|x, y| x * y * (x - 1.0) * (y - 1.0) * (x - 2.0) * (y - 2.0))
    }
}
