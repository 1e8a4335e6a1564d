use super::ProblemError;

/// Cholesky factor of a symmetric positive definite band matrix.
///
/// Storage is row-wise over the lower band: entry `(i, i - d)` for
/// `d = 0..=bandwidth` sits at `i * (bandwidth + 1) + d`.
#[derive(Debug, Clone)]
pub struct BandedCholesky {
    n: usize,
    bandwidth: usize,
    l: Vec<f64>,
}

impl BandedCholesky {
    /// Factors the matrix whose lower band is given by `entry(i, j)` for
    /// `j <= i`, `i - j <= bandwidth`.
    pub fn factor(
        n: usize,
        bandwidth: usize,
        entry: impl Fn(usize, usize) -> f64,
    ) -> Result<Self, ProblemError> {
        let w = bandwidth + 1;
        let mut l = vec![0.0; n * w];
        for i in 0..n {
            for d in 0..=bandwidth.min(i) {
                l[i * w + d] = entry(i, i - d);
            }
        }
        for i in 0..n {
            let first = i.saturating_sub(bandwidth);
            for j in first..=i {
                // Both rows i and j are nonzero only from max(first_i, first_j).
                let k0 = first.max(j.saturating_sub(bandwidth));
                let mut s = l[i * w + (i - j)];
                for k in k0..j {
                    s -= l[i * w + (i - k)] * l[j * w + (j - k)];
                }
                if j == i {
                    if !(s > 0.0) || !s.is_finite() {
                        return Err(ProblemError::SingularSystem(format!(
                            "matrix not positive definite at row {i}"
                        )));
                    }
                    l[i * w] = s.sqrt();
                } else {
                    l[i * w + (i - j)] = s / l[j * w];
                }
            }
        }
        Ok(Self { n, bandwidth, l })
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn solve(&self, b: &[f64]) -> Vec<f64> {
        assert_eq!(b.len(), self.n);
        let w = self.bandwidth + 1;
        let mut y = b.to_vec();
        for i in 0..self.n {
            let first = i.saturating_sub(self.bandwidth);
            let mut s = y[i];
            for k in first..i {
                s -= self.l[i * w + (i - k)] * y[k];
            }
            y[i] = s / self.l[i * w];
        }
        for i in (0..self.n).rev() {
            let last = (i + self.bandwidth).min(self.n - 1);
            let mut s = y[i];
            for k in i + 1..=last {
                s -= self.l[k * w + (k - i)] * y[k];
            }
            y[i] = s / self.l[i * w];
        }
        y
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tridiagonal_spd() {
        // 1D Laplacian: A x = b with x = (1, 2, 3, 4).
        let n = 4;
        let entry = |i: usize, j: usize| if i == j { 2.0 } else { -1.0 };
        let chol = BandedCholesky::factor(n, 1, entry).unwrap();
        let x = chol.solve(&[0.0, 0.0, 0.0, 5.0]);
        for (g, e) in x.iter().zip([1.0, 2.0, 3.0, 4.0]) {
            assert!((g - e).abs() < 1e-14);
        }
    }

    #[test]
    fn indefinite_is_rejected() {
        let entry = |i: usize, j: usize| if i == j { 1.0 } else { 2.0 };
        assert!(BandedCholesky::factor(2, 1, entry).is_err());
    }
}
