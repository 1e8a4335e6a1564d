use crate::linalg::norm2;

use super::{BandedCholesky, ProblemError};

/// Relative residual the inner solves must reach.
pub const INNER_TOL: f64 = 1e-12;
const MAX_REFINEMENTS: usize = 4;

/// Uniform grid on `(0, length)^2` with homogeneous Dirichlet boundaries.
///
/// The state vector holds interior nodes `(i, j)`, `1 <= i, j < n`, ordered
/// with `i` fastest.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Grid2d {
    subdivisions: usize,
    length: f64,
}

/// Edge coefficients of the 5-point operator `-div(c grad v)`.
///
/// `x_edges[i + n * (j - 1)]` couples nodes `(i, j)` and `(i + 1, j)`;
/// `y_edges[(i - 1) + (n - 1) * j]` couples `(i, j)` and `(i, j + 1)`.
#[derive(Debug, Clone, PartialEq)]
pub struct StencilCoefficients {
    pub x_edges: Vec<f64>,
    pub y_edges: Vec<f64>,
}

impl Grid2d {
    pub fn new(subdivisions: usize, length: f64) -> Result<Self, ProblemError> {
        if subdivisions < 4 {
            return Err(ProblemError::InvalidParams(format!(
                "need at least 4 subdivisions, got {subdivisions}"
            )));
        }
        if !(length > 0.0) {
            return Err(ProblemError::InvalidParams("domain length must be positive".into()));
        }
        Ok(Self {
            subdivisions,
            length,
        })
    }

    pub fn subdivisions(&self) -> usize {
        self.subdivisions
    }

    pub fn h(&self) -> f64 {
        self.length / self.subdivisions as f64
    }

    /// Interior nodes per axis.
    pub fn width(&self) -> usize {
        self.subdivisions - 1
    }

    pub fn dim(&self) -> usize {
        self.width() * self.width()
    }

    pub fn index(&self, i: usize, j: usize) -> usize {
        (j - 1) * self.width() + (i - 1)
    }

    /// Samples `f(x, y)` at the interior nodes.
    pub fn sample(&self, f: impl Fn(f64, f64) -> f64) -> Vec<f64> {
        let h = self.h();
        let m = self.width();
        (0..self.dim())
            .map(|idx| f((idx % m + 1) as f64 * h, (idx / m + 1) as f64 * h))
            .collect()
    }

    fn node(&self, u: &[f64], i: usize, j: usize) -> f64 {
        let n = self.subdivisions;
        if i == 0 || j == 0 || i == n || j == n {
            0.0
        } else {
            u[self.index(i, j)]
        }
    }

    /// Gradient magnitude at each cell center, `cells[i + n * j]` for the cell
    /// with lower-left node `(i, j)`.
    pub fn cell_gradient_magnitudes(&self, u: &[f64]) -> Vec<f64> {
        let n = self.subdivisions;
        let h2 = 2.0 * self.h();
        let mut cells = Vec::with_capacity(n * n);
        for j in 0..n {
            for i in 0..n {
                let (a, b) = (self.node(u, i, j), self.node(u, i + 1, j));
                let (c, d) = (self.node(u, i, j + 1), self.node(u, i + 1, j + 1));
                let gx = (b - a + d - c) / h2;
                let gy = (c - a + d - b) / h2;
                cells.push(gx.hypot(gy));
            }
        }
        cells
    }

    /// Coefficients `c(s)` where `s` averages the gradient magnitudes of the
    /// two cells sharing each edge.
    pub fn edge_coefficients(&self, u: &[f64], c: impl Fn(f64) -> f64) -> StencilCoefficients {
        let n = self.subdivisions;
        let cells = self.cell_gradient_magnitudes(u);
        let cell = |i: usize, j: usize| cells[i + n * j];
        let mut x_edges = Vec::with_capacity(n * (n - 1));
        for j in 1..n {
            for i in 0..n {
                x_edges.push(c(0.5 * (cell(i, j - 1) + cell(i, j))));
            }
        }
        let mut y_edges = Vec::with_capacity(n * (n - 1));
        for j in 0..n {
            for i in 1..n {
                y_edges.push(c(0.5 * (cell(i - 1, j) + cell(i, j))));
            }
        }
        StencilCoefficients { x_edges, y_edges }
    }

    pub fn uniform_coefficients(&self, value: f64) -> StencilCoefficients {
        let len = self.subdivisions * (self.subdivisions - 1);
        StencilCoefficients {
            x_edges: vec![value; len],
            y_edges: vec![value; len],
        }
    }

    /// `(left, right, down, up)` edge coefficients around interior node `(i, j)`.
    fn around(&self, c: &StencilCoefficients, i: usize, j: usize) -> (f64, f64, f64, f64) {
        let n = self.subdivisions;
        let m = n - 1;
        (
            c.x_edges[(i - 1) + n * (j - 1)],
            c.x_edges[i + n * (j - 1)],
            c.y_edges[(i - 1) + m * (j - 1)],
            c.y_edges[(i - 1) + m * j],
        )
    }

    /// `A v` for the operator `-div(c grad v)`.
    pub fn apply_operator(&self, c: &StencilCoefficients, v: &[f64]) -> Vec<f64> {
        let n = self.subdivisions;
        let inv_h2 = 1.0 / (self.h() * self.h());
        let mut out = vec![0.0; self.dim()];
        for j in 1..n {
            for i in 1..n {
                let (l, r, d, u) = self.around(c, i, j);
                let vc = self.node(v, i, j);
                let s = l * (vc - self.node(v, i - 1, j))
                    + r * (vc - self.node(v, i + 1, j))
                    + d * (vc - self.node(v, i, j - 1))
                    + u * (vc - self.node(v, i, j + 1));
                out[self.index(i, j)] = s * inv_h2;
            }
        }
        out
    }

    /// Dense row-major copy of the operator, for small grids.
    pub fn dense_operator(&self, c: &StencilCoefficients) -> Vec<Vec<f64>> {
        let dim = self.dim();
        let mut rows = vec![vec![0.0; dim]; dim];
        let mut e = vec![0.0; dim];
        for col in 0..dim {
            e[col] = 1.0;
            for (row, v) in self.apply_operator(c, &e).into_iter().enumerate() {
                rows[row][col] = v;
            }
            e[col] = 0.0;
        }
        rows
    }

    pub fn factor(&self, c: &StencilCoefficients) -> Result<BandedCholesky, ProblemError> {
        let m = self.width();
        let inv_h2 = 1.0 / (self.h() * self.h());
        BandedCholesky::factor(self.dim(), m, |row, col| {
            let (i, j) = (row % m + 1, row / m + 1);
            let (l, r, d, u) = self.around(c, i, j);
            if row == col {
                (l + r + d + u) * inv_h2
            } else if col + 1 == row && i > 1 {
                -l * inv_h2
            } else if col + m == row {
                -d * inv_h2
            } else {
                0.0
            }
        })
    }

    /// Solves `A x = b` with the factor of `A`, refining until the relative
    /// residual is below [`INNER_TOL`].
    pub fn solve(
        &self,
        chol: &BandedCholesky,
        c: &StencilCoefficients,
        b: &[f64],
    ) -> Result<Vec<f64>, ProblemError> {
        let b_norm = norm2(b);
        if b_norm == 0.0 {
            return Ok(vec![0.0; b.len()]);
        }
        let mut x = chol.solve(b);
        for _ in 0..MAX_REFINEMENTS {
            let ax = self.apply_operator(c, &x);
            let r: Vec<f64> = b.iter().zip(&ax).map(|(bi, ai)| bi - ai).collect();
            let r_norm = norm2(&r);
            if !r_norm.is_finite() {
                return Err(ProblemError::SingularSystem("non-finite inner residual".into()));
            }
            if r_norm <= INNER_TOL * b_norm {
                return Ok(x);
            }
            for (xi, di) in x.iter_mut().zip(chol.solve(&r)) {
                *xi += di;
            }
        }
        Ok(x)
    }
}
