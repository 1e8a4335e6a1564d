use super::matrix::Matrix;
use super::scalar::{dot, norm2, Scalar};
use super::LinalgError;

/// Sweep budget is `SWEEPS_PER_COLUMN * m`.
pub const SWEEPS_PER_COLUMN: usize = 30;
/// Pairwise orthogonality target, relative to the two column norms.
pub const JACOBI_TOL: f64 = 1e-14;

/// `R = U diag(sigma) V*` with `U`, `V` square unitary and `sigma`
/// nonincreasing.
#[derive(Clone, Debug)]
pub struct SvdFactors<T> {
    pub u: Matrix<T>,
    pub singular_values: Vec<f64>,
    pub v: Matrix<T>,
}

impl<T: Scalar> SvdFactors<T> {
    pub fn reconstruct(&self) -> Matrix<T> {
        let mut us = self.u.clone();
        for (j, &s) in self.singular_values.iter().enumerate() {
            for x in us.col_mut(j) {
                *x = x.scale(s);
            }
        }
        us.matmul(&self.v.adjoint())
    }
}

/// SVD of a small square matrix by one-sided (Hestenes) Jacobi.
///
/// Columns of a working copy are rotated pairwise until mutually orthogonal;
/// the accumulated rotations form `V`, the final column norms are the
/// singular values and the normalized columns form `U`. Any input shape with
/// `rows >= cols` works; `R` from a QR factorization is the intended use.
pub fn small_svd<T: Scalar>(r: &Matrix<T>) -> Result<SvdFactors<T>, LinalgError> {
    let m = r.cols();
    if r.rows() < m {
        return Err(LinalgError::Shape {
            rows: r.rows(),
            cols: m,
        });
    }
    if !r.as_slice().iter().all(|x| x.is_finite()) {
        return Err(LinalgError::NonFinite);
    }

    let mut a = r.clone();
    let mut v = Matrix::<T>::identity(m);
    let tol = JACOBI_TOL.max(4.0 * m as f64 * f64::EPSILON);
    let budget = SWEEPS_PER_COLUMN * m.max(1);

    let mut converged = m < 2;
    let mut sweeps = 0;
    while !converged {
        if sweeps == budget {
            return Err(LinalgError::NoConvergence { sweeps });
        }
        sweeps += 1;
        let mut rotated = false;
        for p in 0..m - 1 {
            for q in p + 1..m {
                let alpha: f64 = a.col(p).iter().map(|x| x.abs_sqr()).sum();
                let beta: f64 = a.col(q).iter().map(|x| x.abs_sqr()).sum();
                if alpha == 0.0 || beta == 0.0 {
                    continue;
                }
                let gamma = dot(a.col(p), a.col(q));
                let g = gamma.abs();
                if g <= tol * (alpha.sqrt() * beta.sqrt()) {
                    continue;
                }
                rotated = true;
                // Rotate (a_p, e^{-i phi} a_q) by a real Jacobi rotation.
                let zeta = (beta - alpha) / (2.0 * g);
                let t = zeta.signum() / (zeta.abs() + (1.0 + zeta * zeta).sqrt());
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = c * t;
                let ph = gamma.phase().conj();
                rotate_columns(&mut a, p, q, c, s, ph);
                rotate_columns(&mut v, p, q, c, s, ph);
            }
        }
        converged = !rotated;
    }

    let norms: Vec<f64> = a.columns().map(norm2).collect();
    let mut order: Vec<usize> = (0..m).collect();
    order.sort_by(|&i, &j| norms[j].total_cmp(&norms[i]).then(i.cmp(&j)));

    let rows = r.rows();
    let mut u = Matrix::<T>::zeros(rows, m);
    let mut v_sorted = Matrix::<T>::zeros(m, m);
    let mut singular_values = Vec::with_capacity(m);
    let mut zero_cols = Vec::new();
    for (dst, &src) in order.iter().enumerate() {
        let s = norms[src];
        singular_values.push(s);
        v_sorted.col_mut(dst).copy_from_slice(v.col(src));
        if s > 0.0 {
            for (o, &x) in u.col_mut(dst).iter_mut().zip(a.col(src)) {
                *o = x.scale(1.0 / s);
            }
        } else {
            zero_cols.push(dst);
        }
    }
    complete_orthonormal(&mut u, &zero_cols);

    Ok(SvdFactors {
        u,
        singular_values,
        v: v_sorted,
    })
}

/// `x_p <- c x_p - s ph x_q`, `x_q <- s x_p + c ph x_q`.
fn rotate_columns<T: Scalar>(x: &mut Matrix<T>, p: usize, q: usize, c: f64, s: f64, ph: T) {
    let rows = x.rows();
    for i in 0..rows {
        let xp = x[(i, p)];
        let xq = ph * x[(i, q)];
        x[(i, p)] = xp.scale(c) - xq.scale(s);
        x[(i, q)] = xp.scale(s) + xq.scale(c);
    }
}

/// Fills the listed columns of `u` with unit vectors orthogonal to every
/// other column, drawing candidates from the standard basis.
fn complete_orthonormal<T: Scalar>(u: &mut Matrix<T>, targets: &[usize]) {
    let rows = u.rows();
    let mut filled: Vec<usize> = (0..u.cols()).filter(|j| !targets.contains(j)).collect();
    for &t in targets {
        for basis in 0..rows {
            let mut cand = vec![T::zero(); rows];
            cand[basis] = T::one();
            for _ in 0..2 {
                for &j in &filled {
                    let proj = dot(u.col(j), &cand);
                    for (c, &q) in cand.iter_mut().zip(u.col(j)) {
                        *c -= proj * q;
                    }
                }
            }
            let nrm = norm2(&cand);
            if nrm > 0.5 {
                for (o, c) in u.col_mut(t).iter_mut().zip(cand) {
                    *o = c.scale(1.0 / nrm);
                }
                filled.push(t);
                break;
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_complex::Complex64;

    #[test]
    fn diagonal_input() {
        let r = Matrix::from_rows(&[vec![3.0, 0.0], vec![0.0, 1.0]]);
        let svd = small_svd(&r).unwrap();
        assert_eq!(svd.singular_values, vec![3.0, 1.0]);
        assert_eq!(svd.u[(0, 0)].abs(), 1.0);
        assert_eq!(svd.v[(1, 1)].abs(), 1.0);
    }

    #[test]
    fn unit_upper_triangular_gives_golden_ratio() {
        // Eigenvalues of R*R = [[1,1],[1,2]] solve l^2 - 3l + 1 = 0.
        let r = Matrix::from_rows(&[vec![1.0, 1.0], vec![0.0, 1.0]]);
        let svd = small_svd(&r).unwrap();
        let l1 = (3.0 + 5f64.sqrt()) / 2.0;
        let l2 = (3.0 - 5f64.sqrt()) / 2.0;
        assert!((svd.singular_values[0] - l1.sqrt()).abs() < 1e-15);
        assert!((svd.singular_values[1] - l2.sqrt()).abs() < 1e-15);
        assert!(svd.reconstruct().sub(&r).frobenius_norm() < 1e-15);
    }

    #[test]
    fn rank_deficient_input_completes_u() {
        let r = Matrix::from_rows(&[vec![1.0, 2.0, 0.0], vec![0.0, 0.0, 0.0], vec![0.0, 0.0, 0.0]]);
        let svd = small_svd(&r).unwrap();
        assert!((svd.singular_values[0] - 5f64.sqrt()).abs() < 1e-14);
        assert_eq!(svd.singular_values[1], 0.0);
        let utu = svd.u.adjoint().matmul(&svd.u);
        assert!(utu.sub(&Matrix::identity(3)).max_abs() < 1e-14);
        assert!(svd.reconstruct().sub(&r).max_abs() < 1e-14);
    }

    #[test]
    fn complex_input_reconstructs() {
        let c = |re, im| Complex64::new(re, im);
        let r = Matrix::from_rows(&[
            vec![c(2.0, 1.0), c(0.5, -1.0), c(0.0, 0.3)],
            vec![c(0.0, 0.0), c(1.0, 1.0), c(-0.4, 0.2)],
            vec![c(0.0, 0.0), c(0.0, 0.0), c(0.1, -0.05)],
        ]);
        let svd = small_svd(&r).unwrap();
        assert!(svd.reconstruct().sub(&r).frobenius_norm() <= 1e-14 * r.frobenius_norm());
        let vv = svd.v.adjoint().matmul(&svd.v);
        assert!(vv.sub(&Matrix::identity(3)).max_abs() < 1e-14);
        assert!(svd.singular_values.windows(2).all(|w| w[0] >= w[1]));
    }
}
