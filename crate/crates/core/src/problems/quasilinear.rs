use std::f64::consts::PI;

use super::grid2d::{Grid2d, StencilCoefficients};
use super::{check_len, BandedCholesky, FixedPointProblem, ProblemError};

/// `(1 + sqrt(3)/2 + pi/3)^{-2}`, the damping bound for `mu(s) = 1 + arctan(s)`.
pub fn quasilinear_beta_star() -> f64 {
    let l = 1.0 + 3f64.sqrt() / 2.0 + PI / 3.0;
    1.0 / (l * l)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Diffusivity {
    /// `mu(s) = 1 + arctan(s)`.
    #[default]
    Arctan,
    /// `mu(s) = 1`; turns the problem into a Poisson solve.
    Unit,
}

impl Diffusivity {
    pub fn eval(self, s: f64) -> f64 {
        match self {
            Self::Arctan => 1.0 + s.atan(),
            Self::Unit => 1.0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuasilinearParams {
    pub subdivisions: usize,
    pub forcing: f64,
    pub diffusivity: Diffusivity,
}

impl Default for QuasilinearParams {
    fn default() -> Self {
        Self {
            subdivisions: 64,
            forcing: PI,
            diffusivity: Diffusivity::Arctan,
        }
    }
}

/// Picard map for `-div(mu(|grad u|) grad u) = f` on `(0, 1)^2`.
///
/// The update solves `-lap w = f + div(mu(|grad u|) grad u)`, so
/// `g(u) = u + w`. The Poisson factor is computed once.
#[derive(Debug, Clone)]
pub struct Quasilinear {
    params: QuasilinearParams,
    grid: Grid2d,
    laplacian: StencilCoefficients,
    poisson: BandedCholesky,
    rhs: Vec<f64>,
}

impl Quasilinear {
    pub fn new(params: QuasilinearParams) -> Result<Self, ProblemError> {
        let grid = Grid2d::new(params.subdivisions, 1.0)?;
        let laplacian = grid.uniform_coefficients(1.0);
        let poisson = grid.factor(&laplacian)?;
        let rhs = vec![params.forcing; grid.dim()];
        Ok(Self {
            params,
            grid,
            laplacian,
            poisson,
            rhs,
        })
    }

    pub fn params(&self) -> &QuasilinearParams {
        &self.params
    }

    pub fn grid(&self) -> &Grid2d {
        &self.grid
    }

    /// The Picard correction `w(u)`.
    pub fn update(&self, u: &[f64]) -> Result<Vec<f64>, ProblemError> {
        check_len(self.grid.dim(), u.len())?;
        let mu = self.params.diffusivity;
        let coeffs = self.grid.edge_coefficients(u, |s| mu.eval(s));
        let flux = self.grid.apply_operator(&coeffs, u);
        let r: Vec<f64> = self.rhs.iter().zip(&flux).map(|(f, a)| f - a).collect();
        self.grid.solve(&self.poisson, &self.laplacian, &r)
    }
}

impl FixedPointProblem<f64> for Quasilinear {
    fn dim(&self) -> usize {
        self.grid.dim()
    }

    fn apply(&self, u: &[f64]) -> Result<Vec<f64>, ProblemError> {
        let w = self.update(u)?;
        Ok(u.iter().zip(w).map(|(a, b)| a + b).collect())
    }

    fn description(&self) -> String {
        format!(
            "quasilinear, mu = {:?}, f = {}, {}x{} grid",
            self.params.diffusivity,
            self.params.forcing,
            self.params.subdivisions,
            self.params.subdivisions
        )
    }

    fn beta_star(&self) -> Option<f64> {
        Some(quasilinear_beta_star())
    }
}
