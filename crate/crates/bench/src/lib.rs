//! Deterministic fixtures shared by the kernel benchmarks.

use faa_core::Matrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// History-like `n x m` matrix: uniform entries with column lengths decaying
/// by `decay` per column, newest first.
pub fn history(n: usize, m: usize, decay: f64, seed: u64) -> Matrix<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut data = Vec::with_capacity(n * m);
    for j in 0..m {
        let scale = decay.powi(j as i32);
        data.extend((0..n).map(|_| scale * rng.gen_range(-1.0..1.0)));
    }
    Matrix::from_col_major(n, m, data)
}

pub fn vector(n: usize, seed: u64) -> Vec<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..n).map(|_| rng.gen_range(-1.0..1.0)).collect()
}
