use super::matrix::Matrix;
use super::scalar::{dot, norm2, Scalar};
use super::LinalgError;

/// Relative pivot size below which `R` is treated as singular.
pub const SINGULAR_R_RATIO: f64 = 1e-30;

/// Economy factorization `F = QR` with `Q` (`n x m`) orthonormal and `R`
/// (`m x m`) upper triangular.
///
/// Diagonal entries of `R` keep whatever sign or phase the Householder
/// reflections produce.
#[derive(Clone, Debug, PartialEq)]
pub struct QrFactors<T> {
    pub q: Matrix<T>,
    pub r: Matrix<T>,
}

impl<T: Scalar> QrFactors<T> {
    pub fn depth(&self) -> usize {
        self.r.cols()
    }

    /// Factors of the leading `k` columns, obtained by truncation.
    ///
    /// Valid because column `j` of `F` only involves the first `j` columns of
    /// `Q` and rows of `R`.
    pub fn truncate(&self, k: usize) -> Self {
        Self {
            q: self.q.leading_columns(k),
            r: self.r.leading_block(k, k),
        }
    }

    pub fn diag_abs(&self) -> Vec<f64> {
        (0..self.depth()).map(|i| self.r[(i, i)].abs()).collect()
    }

    /// `QR`, for reconstruction checks.
    pub fn product(&self) -> Matrix<T> {
        self.q.matmul(&self.r)
    }
}

/// Householder QR that never fails on exact rank deficiency.
///
/// A zero trailing sub-column gets an identity reflector and a zero diagonal
/// in `R`; `Q` stays orthonormal and `QR = F` still holds. The returned index
/// is the first such column, if any.
pub(crate) fn householder_qr<T: Scalar>(f: &Matrix<T>) -> (QrFactors<T>, Option<usize>) {
    let n = f.rows();
    let m = f.cols();
    assert!(n >= m, "economy QR needs rows >= cols, got {n} x {m}");

    let mut a = f.clone();
    // Householder vectors live below and on the diagonal; tau == 0 marks identity.
    let mut taus = vec![0.0_f64; m];
    let mut vs: Vec<Vec<T>> = Vec::with_capacity(m);
    let mut first_zero = None;

    for k in 0..m {
        let x = &a.col(k)[k..];
        let norm_x = norm2(x);
        // A subnormal norm cannot be inverted; such a column is numerically zero.
        if norm_x == 0.0 || !(1.0 / norm_x).is_finite() {
            first_zero.get_or_insert(k);
            vs.push(Vec::new());
            continue;
        }
        let x0 = x[0];
        let alpha = -x0.phase().scale(norm_x);
        // v = (x - alpha e1) / |x| keeps entries O(1); unscaled, v*v underflows
        // for columns below ~1e-154.
        let inv = 1.0 / norm_x;
        let mut v: Vec<T> = x.iter().map(|&xi| xi.scale(inv)).collect();
        v[0] = x0.scale(inv) + x0.phase();
        // v*v = 2 (1 + |x0| / |x|) exactly, avoiding cancellation.
        let vtv = 2.0 * (1.0 + x0.abs() * inv);
        let tau = 2.0 / vtv;

        {
            let col = a.col_mut(k);
            col[k] = alpha;
            for c in col[k + 1..].iter_mut() {
                *c = T::zero();
            }
        }
        for j in k + 1..m {
            let col = &mut a.col_mut(j)[k..];
            let s = dot(&v, col).scale(tau);
            for (c, &vi) in col.iter_mut().zip(&v) {
                *c -= s * vi;
            }
        }
        taus[k] = tau;
        vs.push(v);
    }

    let mut r = Matrix::zeros(m, m);
    for j in 0..m {
        for i in 0..=j {
            r[(i, j)] = a[(i, j)];
        }
    }

    let mut q = Matrix::eye(n, m);
    for k in (0..m).rev() {
        if taus[k] == 0.0 {
            continue;
        }
        let v = &vs[k];
        for j in k..m {
            let col = &mut q.col_mut(j)[k..];
            let s = dot(v, col).scale(taus[k]);
            for (c, &vi) in col.iter_mut().zip(v) {
                *c -= s * vi;
            }
        }
    }

    (QrFactors { q, r }, first_zero)
}

/// Economy QR by Householder reflections with explicit thin-`Q` accumulation.
///
/// Fails with [`LinalgError::NumericalBreakdown`] when a column is exactly
/// dependent on the ones before it.
pub fn economy_qr<T: Scalar>(f: &Matrix<T>) -> Result<QrFactors<T>, LinalgError> {
    if f.cols() == 0 || f.rows() < f.cols() {
        return Err(LinalgError::Shape {
            rows: f.rows(),
            cols: f.cols(),
        });
    }
    if !f.as_slice().iter().all(|x| x.is_finite()) {
        return Err(LinalgError::NonFinite);
    }
    let (qr, zero) = householder_qr(f);
    match zero {
        Some(column) => Err(LinalgError::NumericalBreakdown { column }),
        None => Ok(qr),
    }
}

fn check_pivots<T: Scalar>(r: &Matrix<T>) -> Result<(), LinalgError> {
    let diag: Vec<f64> = (0..r.cols()).map(|i| r[(i, i)].abs()).collect();
    let max = diag.iter().cloned().fold(0.0, f64::max);
    match diag.iter().position(|&d| !(d >= SINGULAR_R_RATIO * max) || d == 0.0) {
        Some(index) => Err(LinalgError::SingularR { index }),
        None => Ok(()),
    }
}

/// Solves `R x = b` for upper-triangular `R`.
pub fn back_substitute<T: Scalar>(r: &Matrix<T>, b: &[T]) -> Result<Vec<T>, LinalgError> {
    check_pivots(r)?;
    let m = r.cols();
    let mut x = b.to_vec();
    for i in (0..m).rev() {
        let mut s = x[i];
        for l in i + 1..m {
            s -= r[(i, l)] * x[l];
        }
        x[i] = s / r[(i, i)];
    }
    Ok(x)
}

/// Minimizer of `|F gamma - w|` from the factors of `F`: `R gamma = Q* w`.
pub fn least_squares_solve<T: Scalar>(qr: &QrFactors<T>, w: &[T]) -> Result<Vec<T>, LinalgError> {
    if w.len() != qr.q.rows() {
        return Err(LinalgError::Dimension {
            expected: qr.q.rows(),
            found: w.len(),
        });
    }
    let rhs = qr.q.adjoint_matvec(w);
    back_substitute(&qr.r, &rhs)
}

/// Inverse of an upper-triangular matrix; the result is exactly upper triangular.
pub fn triangular_inverse<T: Scalar>(r: &Matrix<T>) -> Result<Matrix<T>, LinalgError> {
    check_pivots(r)?;
    let m = r.cols();
    let mut inv = Matrix::zeros(m, m);
    for j in 0..m {
        inv[(j, j)] = T::one() / r[(j, j)];
        for i in (0..j).rev() {
            let mut s = T::zero();
            for l in i + 1..=j {
                s += r[(i, l)] * inv[(l, j)];
            }
            inv[(i, j)] = -s / r[(i, i)];
        }
    }
    Ok(inv)
}

/// `|F|_F |R^{-1}|_F` given `|F|_F` and the triangular factor.
pub fn frobenius_cond_from_r<T: Scalar>(f_norm: f64, r: &Matrix<T>) -> Result<f64, LinalgError> {
    Ok(f_norm * triangular_inverse(r)?.frobenius_norm())
}

/// Frobenius condition number `|F|_F |F^+|_F`, evaluated as `|F|_F |R^{-1}|_F`.
pub fn frobenius_cond<T: Scalar>(f: &Matrix<T>) -> Result<f64, LinalgError> {
    let qr = economy_qr(f)?;
    frobenius_cond_from_r(f.frobenius_norm(), &qr.r)
}

/// Direction sines `sigma_i = |r_ii| / |f_i|` for columns `2..=m`.
///
/// `column_norms` are the norms of the factored columns. Values are clamped
/// to `[0, 1]`; a single-column factorization yields an empty list.
pub fn direction_sines<T: Scalar>(qr: &QrFactors<T>, column_norms: &[f64]) -> Vec<f64> {
    assert_eq!(column_norms.len(), qr.depth());
    (1..qr.depth())
        .map(|i| {
            let s = qr.r[(i, i)].abs() / column_norms[i];
            if s.is_nan() {
                0.0
            } else {
                s.clamp(0.0, 1.0)
            }
        })
        .collect()
}
