mod common;

use common::*;
use faa_core::filtering::{column_bounds, condition_filter, tsvd_solve, FilterOrder, FilterParams};
use faa_core::Matrix;
use proptest::prelude::*;
use rand::Rng;

/// `F` whose direction sines are prescribed: column `j` has sine
/// `sines[j - 1]` against the span of the earlier columns.
fn matrix_with_sines(
    r: &mut rand_chacha::ChaCha8Rng,
    n: usize,
    norms: &[f64],
    sines: &[f64],
) -> Matrix<f64> {
    let m = norms.len();
    let q = random_orthogonal(r, n);
    let mut cols = Vec::with_capacity(m);
    for j in 0..m {
        let mut col: Vec<f64> = q.col(j).to_vec();
        if j > 0 {
            let s = sines[j - 1];
            let c = (1.0 - s * s).sqrt();
            let coeffs = random_vector(r, j);
            let cn = faa_core::linalg::norm2(&coeffs);
            let mut u = vec![0.0; n];
            for (i, a) in coeffs.iter().enumerate() {
                for (ui, qi) in u.iter_mut().zip(q.col(i)) {
                    *ui += a / cn * qi;
                }
            }
            for (x, ui) in col.iter_mut().zip(&u) {
                *x = s * *x + c * ui;
            }
        }
        for x in col.iter_mut() {
            *x *= norms[j];
        }
        cols.push(col);
    }
    Matrix::from_columns(&cols)
}

/// Squared column norms of `R^{-1}` from an independent QR.
fn oracle_inverse_column_norms(f: &Matrix<f64>) -> Vec<f64> {
    let r = to_na(f).qr().r();
    let inv = r.try_inverse().expect("oracle R is singular");
    (0..f.cols()).map(|j| inv.column(j).norm_squared()).collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn filtered_condition_is_below_cap(
        seed in any::<u64>(),
        n in 40usize..200,
        m in 2usize..30,
        cs in 0.02f64..0.95,
        log_kappa in 0.3f64..10.0,
        angle_first in any::<bool>(),
        sharpen in any::<bool>(),
    ) {
        let mut r = rng(seed);
        let f = adversarial_history(&mut r, n, m);
        let kappa = 10f64.powf(log_kappa);
        let order = if angle_first { FilterOrder::AngleThenLength } else { FilterOrder::LengthThenAngle };
        let mut params = FilterParams::new(cs, kappa).unwrap().with_order(order);
        params.sharpen = sharpen;
        let out = condition_filter(&f, &f, &params).unwrap();
        prop_assert!(out.kept_mask[0]);
        prop_assert_eq!(out.kept_mask.iter().filter(|&&k| k).count(), out.depth());
        prop_assert!(oracle_frobenius_cond(&out.f) <= kappa);
        // Returned factors belong to the returned matrix.
        let qr = out.qr.as_ref().unwrap();
        prop_assert!(qr.product().sub(&out.f).frobenius_norm() <= 1e-12 * out.f.frobenius_norm());
        // E columns follow F columns.
        prop_assert_eq!(out.e.as_slice(), out.f.as_slice());
    }

    #[test]
    fn inverse_columns_obey_bounds(
        seed in any::<u64>(),
        m in 1usize..12,
        cs in 0.05f64..0.99,
    ) {
        let mut r = rng(seed);
        let n = m + r.gen_range(0..20);
        let norms: Vec<f64> = (0..m).map(|_| 10f64.powf(r.gen_range(-3.0..3.0))).collect();
        let sines: Vec<f64> = (1..m).map(|_| if r.gen_bool(0.3) { cs } else { r.gen_range(cs..=1.0) }).collect();
        let f = matrix_with_sines(&mut r, n, &norms, &sines);
        let bounds = column_bounds(&f.column_norms(), cs);
        for (s2, b) in oracle_inverse_column_norms(&f).iter().zip(&bounds) {
            prop_assert!(*s2 <= b * (1.0 + 1e-10), "{} > {}", s2, b);
        }
    }

    #[test]
    fn bounds_are_prefix_stable(
        norms in proptest::collection::vec(1e-4f64..1e4, 1..20),
        cs in 0.01f64..0.99,
        cut in 1usize..20,
    ) {
        let full = column_bounds(&norms, cs);
        let j = cut.min(norms.len());
        prop_assert_eq!(&column_bounds(&norms[..j], cs)[..], &full[..j]);
    }

    #[test]
    fn tsvd_matches_truncated_pseudoinverse(seed in any::<u64>(), n in 5usize..40, m in 1usize..8, log_kappa in 0.5f64..8.0) {
        prop_assume!(n >= m);
        let mut r = rng(seed);
        let f = adversarial_history(&mut r, n, m);
        let w = random_vector(&mut r, n);
        let kappa = 10f64.powf(log_kappa);
        let sol = tsvd_solve(&f, &w, kappa).unwrap();
        let oracle_sv = oracle_singular_values(&f);
        // Keep clear of the truncation threshold, where rank is ambiguous.
        let near_cut = oracle_sv.iter().any(|s| ((oracle_sv[0] / s) / kappa - 1.0).abs() < 1e-6);
        prop_assume!(!near_cut);
        let oracle = oracle_tsvd(&f, &w, kappa);
        prop_assert!(rel_diff(&sol.gamma, &oracle) <= 1e-8);
        prop_assert!(sol.singular_value_ratio() < kappa);
    }
}

#[test]
fn closed_form_bounds_at_forty_five_degrees() {
    let b = column_bounds(&[1.0, 1.0, 1.0], 0.5f64.sqrt());
    for (got, want) in b.iter().zip([1.0, 3.0, 8.0]) {
        assert!((got - want).abs() <= 1e-12, "{b:?}");
    }
}

#[test]
fn bounds_are_attained_by_adversarial_structure() {
    // With every sine equal to cs the worst case is approached; the bound must
    // still hold.
    let mut r = rng(5);
    for cs in [0.1, 0.4, 0.5f64.sqrt()] {
        let norms = [1.0, 0.5, 2.0, 1.0, 0.1];
        let f = matrix_with_sines(&mut r, 12, &norms, &[cs; 4]);
        let bounds = column_bounds(&f.column_norms(), cs);
        for (s2, b) in oracle_inverse_column_norms(&f).iter().zip(&bounds) {
            assert!(*s2 <= b * (1.0 + 1e-10));
        }
    }
}

