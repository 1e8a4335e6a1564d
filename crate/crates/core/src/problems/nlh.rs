use num_complex::Complex64;

use super::{check_len, solve_tridiagonal, FixedPointProblem, ProblemError};

/// Parameters of the 1D nonlinear Helmholtz problem on `[0, length]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NlhParams {
    /// Linear wavenumber `k0`.
    pub k0: f64,
    /// Kerr coefficient `eps` (constant in space).
    pub eps: f64,
    /// Number of grid nodes, boundaries included.
    pub nodes: usize,
    pub length: f64,
}

impl Default for NlhParams {
    fn default() -> Self {
        Self {
            k0: 8.0,
            eps: 0.2,
            nodes: 2001,
            length: 10.0,
        }
    }
}

/// Picard map for `u'' + k0^2 (1 + eps |u|^2) u = 0` with the radiating
/// boundary conditions `u' + i k0 u = 2 i k0` at `x = 0` and
/// `u' - i k0 u = 0` at `x = length`.
///
/// `g(u)` solves the linear problem with `|u|^2` frozen. Central differences
/// discretize `u''`; the Robin rows eliminate a ghost node on each side,
/// which keeps them second order. All rows are scaled by `h^2`.
#[derive(Debug, Clone)]
pub struct NonlinearHelmholtz {
    params: NlhParams,
    h: f64,
}

impl NonlinearHelmholtz {
    pub fn new(params: NlhParams) -> Result<Self, ProblemError> {
        if params.nodes < 3 {
            return Err(ProblemError::InvalidParams(format!(
                "need at least 3 nodes, got {}",
                params.nodes
            )));
        }
        if !(params.k0 > 0.0) || !(params.length > 0.0) {
            return Err(ProblemError::InvalidParams(
                "k0 and length must be positive".into(),
            ));
        }
        let h = params.length / (params.nodes - 1) as f64;
        Ok(Self { params, h })
    }

    pub fn params(&self) -> &NlhParams {
        &self.params
    }

    pub fn grid(&self) -> Vec<f64> {
        (0..self.params.nodes).map(|j| j as f64 * self.h).collect()
    }

    /// Assembled tridiagonal system `(lower, diag, upper, rhs)` for a frozen
    /// intensity `|u|^2`.
    pub fn assemble(&self, u: &[Complex64]) -> (Vec<Complex64>, Vec<Complex64>, Vec<Complex64>, Vec<Complex64>) {
        let n = self.params.nodes;
        let k0 = self.params.k0;
        let h = self.h;
        let one = Complex64::new(1.0, 0.0);
        let ikh2 = Complex64::new(0.0, 2.0 * k0 * h);
        let diag_at = |j: usize| {
            let kerr = 1.0 + self.params.eps * u[j].norm_sqr();
            Complex64::new(-2.0 + h * h * k0 * k0 * kerr, 0.0)
        };

        let mut lower = vec![one; n - 1];
        let mut upper = vec![one; n - 1];
        let mut diag: Vec<Complex64> = (0..n).map(diag_at).collect();
        let mut rhs = vec![Complex64::new(0.0, 0.0); n];

        upper[0] = Complex64::new(2.0, 0.0);
        diag[0] += ikh2;
        rhs[0] = Complex64::new(0.0, 4.0 * k0 * h);

        lower[n - 2] = Complex64::new(2.0, 0.0);
        diag[n - 1] += ikh2;
        (lower, diag, upper, rhs)
    }
}

impl FixedPointProblem<Complex64> for NonlinearHelmholtz {
    fn dim(&self) -> usize {
        self.params.nodes
    }

    fn apply(&self, u: &[Complex64]) -> Result<Vec<Complex64>, ProblemError> {
        check_len(self.dim(), u.len())?;
        let (lower, diag, upper, rhs) = self.assemble(u);
        solve_tridiagonal(&lower, &diag, &upper, &rhs)
    }

    fn description(&self) -> String {
        format!(
            "nonlinear Helmholtz, k0 = {}, eps = {}, N = {}",
            self.params.k0, self.params.eps, self.params.nodes
        )
    }

    /// Nodal values of `exp(i k0 x)`, the exact solution for `eps = 0`.
    fn initial_guess(&self) -> Vec<Complex64> {
        self.grid()
            .into_iter()
            .map(|x| Complex64::from_polar(1.0, self.params.k0 * x))
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{norm2, sub};

    #[test]
    fn linear_case_is_constant_map() {
        let p = NonlinearHelmholtz::new(NlhParams {
            eps: 0.0,
            nodes: 201,
            ..Default::default()
        })
        .unwrap();
        let u0 = p.initial_guess();
        let u1 = p.apply(&u0).unwrap();
        let u2 = p.apply(&u1).unwrap();
        assert!(norm2(&sub(&u2, &u1)) <= 1e-10);
        // The discrete solution approximates exp(i k0 x).
        assert!(norm2(&sub(&u1, &u0)) / norm2(&u0) < 0.5);
    }

    #[test]
    fn rejects_tiny_grid() {
        assert!(NonlinearHelmholtz::new(NlhParams {
            nodes: 2,
            ..Default::default()
        })
        .is_err());
    }
}
