use crate::linalg::Scalar;

use super::ProblemError;

/// Solves a tridiagonal system by Gaussian elimination with partial
/// pivoting (the `gtsv` scheme).
///
/// `lower` and `upper` hold the sub- and super-diagonals (length `n - 1`),
/// `diag` the diagonal (length `n`).
pub fn solve_tridiagonal<T: Scalar>(
    lower: &[T],
    diag: &[T],
    upper: &[T],
    rhs: &[T],
) -> Result<Vec<T>, ProblemError> {
    let n = diag.len();
    assert!(n >= 1);
    assert_eq!(lower.len(), n - 1);
    assert_eq!(upper.len(), n - 1);
    assert_eq!(rhs.len(), n);

    let dl = lower;
    let mut d = diag.to_vec();
    let mut du = upper.to_vec();
    let mut du2 = vec![T::zero(); n.saturating_sub(2)];
    let mut b = rhs.to_vec();

    for i in 0..n.saturating_sub(1) {
        if d[i].abs() >= dl[i].abs() {
            if d[i].abs() == 0.0 {
                return Err(ProblemError::SingularSystem(format!("zero pivot at row {i}")));
            }
            let fact = dl[i] / d[i];
            d[i + 1] -= fact * du[i];
            let bi = b[i];
            b[i + 1] -= fact * bi;
        } else {
            let fact = d[i] / dl[i];
            d[i] = dl[i];
            let temp = d[i + 1];
            d[i + 1] = du[i] - fact * temp;
            if i + 2 < n {
                du2[i] = du[i + 1];
                du[i + 1] = -fact * du[i + 1];
            }
            du[i] = temp;
            let bi = b[i];
            b[i] = b[i + 1];
            b[i + 1] = bi - fact * b[i + 1];
        }
    }
    if d[n - 1].abs() == 0.0 {
        return Err(ProblemError::SingularSystem(format!("zero pivot at row {}", n - 1)));
    }

    b[n - 1] = b[n - 1] / d[n - 1];
    if n > 1 {
        b[n - 2] = (b[n - 2] - du[n - 2] * b[n - 1]) / d[n - 2];
    }
    for i in (0..n.saturating_sub(2)).rev() {
        b[i] = (b[i] - du[i] * b[i + 1] - du2[i] * b[i + 2]) / d[i];
    }
    Ok(b)
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_complex::Complex64;

    fn apply(lower: &[f64], diag: &[f64], upper: &[f64], x: &[f64]) -> Vec<f64> {
        let n = diag.len();
        (0..n)
            .map(|i| {
                let mut s = diag[i] * x[i];
                if i > 0 {
                    s += lower[i - 1] * x[i - 1];
                }
                if i + 1 < n {
                    s += upper[i] * x[i + 1];
                }
                s
            })
            .collect()
    }

    #[test]
    fn needs_pivoting() {
        // Zero leading diagonal forces a row swap.
        let lower = [1.0, 2.0, -1.0];
        let diag = [0.0, 1.0, 3.0, 1.0];
        let upper = [2.0, 1.0, 0.5];
        let x = [1.0, -2.0, 0.5, 3.0];
        let b = apply(&lower, &diag, &upper, &x);
        let got = solve_tridiagonal(&lower, &diag, &upper, &b).unwrap();
        for (g, e) in got.iter().zip(x) {
            assert!((g - e).abs() < 1e-14);
        }
    }

    #[test]
    fn single_unknown_and_singular() {
        assert_eq!(solve_tridiagonal(&[], &[4.0], &[], &[2.0]).unwrap(), vec![0.5]);
        assert!(solve_tridiagonal(&[0.0], &[0.0, 1.0], &[0.0], &[1.0, 1.0]).is_err());
    }

    #[test]
    fn complex_system() {
        let c = |a, b| Complex64::new(a, b);
        let lower = [c(1.0, 0.0), c(1.0, 0.0)];
        let diag = [c(-2.0, 0.1), c(-2.0, 0.0), c(-1.9, 0.2)];
        let upper = [c(2.0, 0.0), c(1.0, 0.0)];
        let x = [c(1.0, 1.0), c(0.0, -1.0), c(2.0, 0.5)];
        let b: Vec<Complex64> = vec![
            diag[0] * x[0] + upper[0] * x[1],
            lower[0] * x[0] + diag[1] * x[1] + upper[1] * x[2],
            lower[1] * x[1] + diag[2] * x[2],
        ];
        let got = solve_tridiagonal(&lower, &diag, &upper, &b).unwrap();
        for (g, e) in got.iter().zip(x) {
            assert!((g - e).norm() < 1e-14);
        }
    }
}
