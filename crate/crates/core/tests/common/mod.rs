//! Generators and independent oracles shared by the integration tests.
#![allow(dead_code)]

use faa_core::{Complex64, Matrix, Scalar};
use nalgebra::DMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn gaussian(rng: &mut ChaCha8Rng) -> f64 {
    // Box-Muller; the tails do not matter here.
    let u1: f64 = rng.gen_range(f64::EPSILON..1.0);
    let u2: f64 = rng.gen();
    (-2.0 * u1.ln()).sqrt() * (std::f64::consts::TAU * u2).cos()
}

pub fn random_matrix(rng: &mut ChaCha8Rng, rows: usize, cols: usize) -> Matrix<f64> {
    Matrix::from_col_major(rows, cols, (0..rows * cols).map(|_| gaussian(rng)).collect())
}

pub fn random_complex_matrix(rng: &mut ChaCha8Rng, rows: usize, cols: usize) -> Matrix<Complex64> {
    Matrix::from_col_major(
        rows,
        cols,
        (0..rows * cols)
            .map(|_| Complex64::new(gaussian(rng), gaussian(rng)))
            .collect(),
    )
}

pub fn random_vector(rng: &mut ChaCha8Rng, n: usize) -> Vec<f64> {
    (0..n).map(|_| gaussian(rng)).collect()
}

pub fn lift(m: &Matrix<f64>) -> Matrix<Complex64> {
    m.map(|x| Complex64::new(x, 0.0))
}

pub fn to_na<T: Scalar + nalgebra::ComplexField>(m: &Matrix<T>) -> DMatrix<T> {
    DMatrix::from_column_slice(m.rows(), m.cols(), m.as_slice())
}

/// `R^*` from nalgebra's own QR. nalgebra's bidiagonal SVD loses relative
/// accuracy on graded tall matrices and on column-graded `R`; the row-graded
/// `R^*` keeps it.
fn oracle_r<T: Scalar + nalgebra::ComplexField<RealField = f64>>(m: &Matrix<T>) -> DMatrix<T> {
    to_na(m).qr().r().adjoint()
}

/// Singular values from nalgebra, descending.
pub fn oracle_singular_values<T: Scalar + nalgebra::ComplexField<RealField = f64>>(
    m: &Matrix<T>,
) -> Vec<f64> {
    let r = if m.rows() >= m.cols() { oracle_r(m) } else { to_na(m) };
    let mut s: Vec<f64> = r.singular_values().iter().cloned().collect();
    s.sort_by(|a, b| b.partial_cmp(a).unwrap());
    s
}

/// `|F|_F |F^+|_F` from the oracle singular values.
pub fn oracle_frobenius_cond<T: Scalar + nalgebra::ComplexField<RealField = f64>>(
    m: &Matrix<T>,
) -> f64 {
    let s = oracle_singular_values(m);
    let a: f64 = s.iter().map(|x| x * x).sum();
    let b: f64 = s.iter().map(|x| 1.0 / (x * x)).sum();
    (a * b).sqrt()
}

/// Normal-equations solution `(F*F)^{-1} F* w` by LU.
pub fn oracle_normal_equations<T: Scalar + nalgebra::ComplexField<RealField = f64>>(
    f: &Matrix<T>,
    w: &[T],
) -> Vec<T> {
    let a = to_na(f);
    let gram = a.adjoint() * &a;
    let rhs = a.adjoint() * nalgebra::DVector::from_column_slice(w);
    gram.lu().solve(&rhs).expect("oracle Gram matrix is singular").iter().cloned().collect()
}

/// Truncated pseudoinverse applied to `w`, keeping `sigma_1 / sigma_j < kappa`.
pub fn oracle_tsvd(f: &Matrix<f64>, w: &[f64], kappa: f64) -> Vec<f64> {
    // SVD of R^T = U' S V'^T gives F = (Q V') S U'^T.
    let qr = to_na(f).qr();
    let svd = qr.r().transpose().svd(true, true);
    let (u, vt) = (qr.q() * svd.v_t.unwrap().transpose(), svd.u.unwrap().transpose());
    let s = &svd.singular_values;
    let smax = s.max();
    let mut gamma = nalgebra::DVector::<f64>::zeros(f.cols());
    let wv = nalgebra::DVector::from_column_slice(w);
    for j in 0..s.len() {
        if s[j] > 0.0 && smax / s[j] < kappa {
            let coef = u.column(j).dot(&wv) / s[j];
            gamma += vt.row(j).transpose() * coef;
        }
    }
    gamma.iter().cloned().collect()
}

pub fn rel_diff<T: Scalar>(a: &[T], b: &[T]) -> f64 {
    let num: f64 = a.iter().zip(b).map(|(x, y)| (*x - *y).abs_sqr()).sum::<f64>().sqrt();
    let den: f64 = b.iter().map(|y| y.abs_sqr()).sum::<f64>().sqrt();
    num / den.max(f64::MIN_POSITIVE)
}

/// Random orthogonal `n x n` matrix from the QR of a Gaussian matrix.
pub fn random_orthogonal(rng: &mut ChaCha8Rng, n: usize) -> Matrix<f64> {
    let q = to_na(&random_matrix(rng, n, n)).qr().q();
    Matrix::from_col_major(n, n, q.as_slice().to_vec())
}

/// Random unitary `n x n` matrix.
pub fn random_unitary(rng: &mut ChaCha8Rng, n: usize) -> Matrix<Complex64> {
    let q = to_na(&random_complex_matrix(rng, n, n)).qr().q();
    Matrix::from_col_major(n, n, q.as_slice().to_vec())
}

/// Adversarial history matrix: Gaussian columns with geometric length decay,
/// optional near-parallel injections, and a random left reflection.
pub fn adversarial_history(rng: &mut ChaCha8Rng, n: usize, m: usize) -> Matrix<f64> {
    let mut f = random_matrix(rng, n, m);
    let decay = 10f64.powf(-rng.gen_range(0.0..6.0));
    let per_column_jitter = rng.gen_bool(0.5);
    for j in 0..m {
        let mut scale = decay.powi(j as i32);
        if per_column_jitter {
            scale *= 10f64.powf(rng.gen_range(-1.0..1.0));
        }
        for v in f.col_mut(j) {
            *v *= scale;
        }
    }
    let injections = rng.gen_range(0..=m / 3);
    for _ in 0..injections {
        let (src, dst) = (rng.gen_range(0..m), rng.gen_range(0..m));
        if src == dst {
            continue;
        }
        let delta = 10f64.powf(-rng.gen_range(2.0..12.0));
        let src_col = f.col(src).to_vec();
        let src_norm = faa_core::linalg::norm2(&src_col);
        let noise = random_vector(rng, n);
        let noise_norm = faa_core::linalg::norm2(&noise);
        let ratio = 10f64.powf(rng.gen_range(-2.0..2.0));
        for ((d, s), z) in f.col_mut(dst).iter_mut().zip(&src_col).zip(&noise) {
            *d = ratio * (s + delta * src_norm * z / noise_norm);
        }
    }
    // Random reflection I - 2vv^T on the left.
    let v = random_vector(rng, n);
    let vn2: f64 = v.iter().map(|x| x * x).sum();
    for j in 0..m {
        let c = f.col_mut(j);
        let d: f64 = c.iter().zip(&v).map(|(a, b)| a * b).sum::<f64>() * 2.0 / vn2;
        for (ci, vi) in c.iter_mut().zip(&v) {
            *ci -= d * vi;
        }
    }
    f
}
