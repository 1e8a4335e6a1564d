use crate::linalg::{economy_qr, least_squares_solve, small_svd, Matrix, Scalar};

use super::{check_len, FixedPointProblem, ProblemError};

/// Affine map `g(x) = A x + b`.
#[derive(Debug, Clone)]
pub struct LinearToy<T = f64> {
    a: Matrix<T>,
    b: Vec<T>,
}

impl<T: Scalar> LinearToy<T> {
    /// # Panics
    /// If `a` is not square or `b` does not match it.
    pub fn new(a: Matrix<T>, b: Vec<T>) -> Self {
        assert_eq!(a.rows(), a.cols(), "A must be square");
        assert_eq!(a.rows(), b.len(), "b must match A");
        Self { a, b }
    }

    pub fn matrix(&self) -> &Matrix<T> {
        &self.a
    }

    pub fn offset(&self) -> &[T] {
        &self.b
    }

    /// `|A|_2`.
    pub fn spectral_norm(&self) -> f64 {
        small_svd(&self.a).map_or(f64::NAN, |s| s.singular_values[0])
    }
}

impl LinearToy<f64> {
    /// Pseudo-random `A` with `|A|_2 = rho` and `b` with entries in
    /// `[-1, 1]`, reproducible from `seed`.
    pub fn contraction(n: usize, rho: f64, seed: u64) -> Self {
        let mut rng = SplitMix64(seed);
        let mut a = Matrix::from_col_major(n, n, (0..n * n).map(|_| rng.uniform()).collect());
        let norm = small_svd(&a).expect("small random matrix").singular_values[0];
        a = a.map(|x| x * rho / norm);
        let b = (0..n).map(|_| rng.uniform()).collect();
        Self::new(a, b)
    }
}

/// Minimal deterministic generator so the core crate needs no RNG dependency.
struct SplitMix64(u64);

impl SplitMix64 {
    fn next(&mut self) -> u64 {
        self.0 = self.0.wrapping_add(0x9E37_79B9_7F4A_7C15);
        let mut z = self.0;
        z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
        z ^ (z >> 31)
    }

    /// Uniform in `[-1, 1)`.
    fn uniform(&mut self) -> f64 {
        (self.next() >> 11) as f64 / (1u64 << 53) as f64 * 2.0 - 1.0
    }
}

impl<T: Scalar> FixedPointProblem<T> for LinearToy<T> {
    fn dim(&self) -> usize {
        self.b.len()
    }

    fn apply(&self, x: &[T]) -> Result<Vec<T>, ProblemError> {
        check_len(self.dim(), x.len())?;
        let mut y = self.a.matvec(x);
        for (yi, &bi) in y.iter_mut().zip(&self.b) {
            *yi += bi;
        }
        Ok(y)
    }

    fn description(&self) -> String {
        format!("linear toy g(x) = Ax + b, n = {}", self.dim())
    }

    /// `(I - A)^{-1} b` when `I - A` is nonsingular.
    fn known_solution(&self) -> Option<Vec<T>> {
        let n = self.dim();
        let mut m = Matrix::<T>::identity(n);
        for j in 0..n {
            for i in 0..n {
                m[(i, j)] -= self.a[(i, j)];
            }
        }
        let qr = economy_qr(&m).ok()?;
        least_squares_solve(&qr, &self.b).ok()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zero_matrix_is_constant_map() {
        let toy = LinearToy::new(Matrix::zeros(2, 2), vec![1.0, -2.0]);
        assert_eq!(toy.apply(&[5.0, 7.0]).unwrap(), vec![1.0, -2.0]);
        assert_eq!(toy.known_solution().unwrap(), vec![1.0, -2.0]);
    }

    #[test]
    fn scalar_geometric_series() {
        let toy = LinearToy::new(Matrix::from_rows(&[vec![0.5]]), vec![1.0]);
        assert!((toy.known_solution().unwrap()[0] - 2.0).abs() < 1e-15);
    }

    #[test]
    fn contraction_has_requested_norm_and_is_reproducible() {
        let a = LinearToy::contraction(10, 0.9, 7);
        let b = LinearToy::contraction(10, 0.9, 7);
        assert_eq!(a.matrix(), b.matrix());
        assert!((a.spectral_norm() - 0.9).abs() < 1e-12);
    }

    #[test]
    fn wrong_length_is_rejected() {
        let toy = LinearToy::new(Matrix::zeros(2, 2), vec![1.0, -2.0]);
        assert!(toy.apply(&[1.0]).is_err());
    }
}
