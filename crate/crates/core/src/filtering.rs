//! Column filters that bound the condition of the Anderson least-squares
//! matrix, plus the truncated-SVD solve used as a baseline.
//!
//! Columns are ordered newest first and are never reordered. Every filter
//! keeps column 1. The length filter drops an oldest suffix until the
//! closed-form estimate
//!
//! ```text
//! C_F(k) = (sum_{j<=k} |f_j|^2) (sum_{j<=k} b_j)
//! ```
//!
//! is at most `kappa_bar^2`, where `b_j` bounds `|column j of R^{-1}|^2`
//! whenever every direction sine is at least `c_s`. The angle filter then
//! enforces that hypothesis by dropping each column whose sine against the
//! span of the newer columns is below `c_s`. Together they give
//! `cond_F(F) <= kappa_bar`.

use thiserror::Error;

use crate::linalg::{
    direction_sines, economy_qr, householder_qr, small_svd, LinalgError, Matrix, QrFactors,
    Scalar,
};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum FilterError {
    #[error("c_s must lie in (0, 1], got {0}")]
    InvalidSine(f64),
    #[error("kappa_bar must exceed 1, got {0}")]
    InvalidKappa(f64),
    #[error("E and F must have the same, nonzero column count (got {e} and {f})")]
    ColumnMismatch { e: usize, f: usize },
    #[error(transparent)]
    Linalg(#[from] LinalgError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum FilterOrder {
    #[default]
    LengthThenAngle,
    AngleThenLength,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FilterParams {
    /// Minimum direction sine.
    pub cs: f64,
    /// Cap on the Frobenius condition number.
    pub kappa_bar: f64,
    pub order: FilterOrder,
    /// With `AngleThenLength`, feed the smallest realized sine (instead of
    /// `cs`) to the length filter.
    pub sharpen: bool,
}

impl FilterParams {
    pub fn new(cs: f64, kappa_bar: f64) -> Result<Self, FilterError> {
        let p = Self {
            cs,
            kappa_bar,
            order: FilterOrder::default(),
            sharpen: false,
        };
        p.validate()?;
        Ok(p)
    }

    pub fn with_order(mut self, order: FilterOrder) -> Self {
        self.order = order;
        self
    }

    pub fn validate(&self) -> Result<(), FilterError> {
        if !(self.cs > 0.0 && self.cs <= 1.0) {
            return Err(FilterError::InvalidSine(self.cs));
        }
        if !(self.kappa_bar > 1.0) {
            return Err(FilterError::InvalidKappa(self.kappa_bar));
        }
        Ok(())
    }

    pub fn ct(&self) -> f64 {
        cosine_of(self.cs)
    }
}

fn cosine_of(cs: f64) -> f64 {
    (1.0 - cs * cs).max(0.0).sqrt()
}

/// Result of a filter pass.
#[derive(Debug, Clone)]
pub struct FilterOutcome<T> {
    /// One flag per input column, newest first. `kept_mask[0]` is always set.
    pub kept_mask: Vec<bool>,
    /// Filtered `E`.
    pub e: Matrix<T>,
    /// Filtered `F`.
    pub f: Matrix<T>,
    /// Factors of the filtered `F`, when an angle pass ran.
    pub qr: Option<QrFactors<T>>,
    /// The `C_F` value accepted by the length pass, when one ran.
    pub c_f_estimate: Option<f64>,
}

impl<T: Scalar> FilterOutcome<T> {
    pub fn depth(&self) -> usize {
        self.f.cols()
    }

    pub fn dropped_any(&self) -> bool {
        self.kept_mask.iter().any(|k| !k)
    }
}

/// Upper bounds `b_j` on the squared norms of the columns of `R^{-1}`, given
/// the column norms of `F` and a lower bound `cs` on every direction sine.
///
/// `b_j` depends only on the norms with index `<= j`. Overflow to infinity is
/// possible for tiny `cs`; callers treat it as "keep only column 1".
pub fn column_bounds(column_norms: &[f64], cs: f64) -> Vec<f64> {
    let ct = cosine_of(cs);
    let ct2 = ct * ct;
    let cs2 = cs * cs;
    // Growth factor ((ct + cs) / cs)^2 shared by every off-diagonal term.
    let growth = ((ct + cs) / cs).powi(2);
    let inv_sq: Vec<f64> = column_norms.iter().map(|n| 1.0 / (n * n)).collect();

    (0..column_norms.len())
        .map(|j| {
            if j == 0 {
                return inv_sq[0];
            }
            // Entry (1, j): ct^2 (ct+cs)^{2(j-2)} / (|f_1|^2 cs^{2(j-2)}), 1-based j.
            let mut sum = ct2 * growth.powi(j as i32 - 1) * inv_sq[0];
            // Entries (i, j), 2 <= i < j: ct^2 (ct+cs)^{2(j-i-1)} / (|f_i|^2 cs^{2(j-i)}).
            for i in 1..j {
                sum += ct2 * growth.powi((j - i - 1) as i32) / cs2 * inv_sq[i];
            }
            (sum + inv_sq[j]) / cs2
        })
        .collect()
}

fn check_pair<T: Scalar>(e: &Matrix<T>, f: &Matrix<T>) -> Result<(), FilterError> {
    if e.cols() != f.cols() || f.cols() == 0 {
        return Err(FilterError::ColumnMismatch {
            e: e.cols(),
            f: f.cols(),
        });
    }
    Ok(())
}

/// Keeps the longest prefix `1..=k` whose estimate `C_F(k) <= kappa_bar^2`.
///
/// `k = 1` always qualifies since `C_F(1) = 1`.
pub fn length_filter<T: Scalar>(
    e: &Matrix<T>,
    f: &Matrix<T>,
    params: &FilterParams,
) -> Result<FilterOutcome<T>, FilterError> {
    check_pair(e, f)?;
    Ok(length_pass(e, f, &f.column_norms(), params.cs, params.kappa_bar))
}

fn length_pass<T: Scalar>(
    e: &Matrix<T>,
    f: &Matrix<T>,
    norms: &[f64],
    cs: f64,
    kappa_bar: f64,
) -> FilterOutcome<T> {
    let m = norms.len();
    let bounds = column_bounds(norms, cs);
    let mut norm_sums = Vec::with_capacity(m);
    let mut bound_sums = Vec::with_capacity(m);
    let (mut sn, mut sb) = (0.0, 0.0);
    for (n, b) in norms.iter().zip(&bounds) {
        sn += n * n;
        sb += b;
        norm_sums.push(sn);
        bound_sums.push(sb);
    }

    let cap = kappa_bar * kappa_bar;
    let mut k = 1;
    let mut c_f = norm_sums[0] * bound_sums[0];
    for kk in (2..=m).rev() {
        let est = norm_sums[kk - 1] * bound_sums[kk - 1];
        if est <= cap {
            k = kk;
            c_f = est;
            break;
        }
    }

    let kept_mask: Vec<bool> = (0..m).map(|j| j < k).collect();
    FilterOutcome {
        kept_mask,
        e: e.leading_columns(k),
        f: f.leading_columns(k),
        qr: None,
        c_f_estimate: Some(c_f),
    }
}

/// Drops every column `i >= 2` whose direction sine on the factorization of
/// the input is below `cs`, then refactors if anything was dropped.
///
/// Ties `sigma_i == cs` are kept. A single pass is made.
pub fn angle_filter<T: Scalar>(
    e: &Matrix<T>,
    f: &Matrix<T>,
    cs: f64,
) -> Result<FilterOutcome<T>, FilterError> {
    check_pair(e, f)?;
    let (outcome, _) = angle_pass(e, f, cs)?;
    Ok(outcome)
}

/// Angle pass that also reports the sines of the returned factorization.
fn angle_pass<T: Scalar>(
    e: &Matrix<T>,
    f: &Matrix<T>,
    cs: f64,
) -> Result<(FilterOutcome<T>, Vec<f64>), FilterError> {
    let norms = f.column_norms();
    if norms[0] == 0.0 {
        return Err(LinalgError::NumericalBreakdown { column: 0 }.into());
    }
    let (qr, _) = householder_qr(f);
    let sines = direction_sines(&qr, &norms);

    let mut kept_mask = vec![true; f.cols()];
    for (i, &s) in sines.iter().enumerate() {
        if s < cs {
            kept_mask[i + 1] = false;
        }
    }

    if kept_mask.iter().all(|&k| k) {
        return Ok((
            FilterOutcome {
                kept_mask,
                e: e.clone(),
                f: f.clone(),
                qr: Some(qr),
                c_f_estimate: None,
            },
            sines,
        ));
    }

    let f_kept = f.select_columns(&kept_mask);
    let e_kept = e.select_columns(&kept_mask);
    let qr = economy_qr(&f_kept)?;
    let sines = direction_sines(&qr, &f_kept.column_norms());
    Ok((
        FilterOutcome {
            kept_mask,
            e: e_kept,
            f: f_kept,
            qr: Some(qr),
            c_f_estimate: None,
        },
        sines,
    ))
}

/// Maps a mask over a filtered column set back onto the original columns.
fn compose_masks(outer: &[bool], inner: &[bool]) -> Vec<bool> {
    let mut it = inner.iter();
    outer
        .iter()
        .map(|&kept| kept && *it.next().expect("inner mask covers kept columns"))
        .collect()
}

/// Length and angle filtering in the configured order.
///
/// The filtered `F` satisfies `cond_F(F) <= kappa_bar` and the returned QR
/// factors it. With `AngleThenLength` the QR factors from the angle pass are
/// truncated to the prefix kept by the length pass.
pub fn condition_filter<T: Scalar>(
    e: &Matrix<T>,
    f: &Matrix<T>,
    params: &FilterParams,
) -> Result<FilterOutcome<T>, FilterError> {
    check_pair(e, f)?;
    params.validate()?;
    match params.order {
        FilterOrder::LengthThenAngle => {
            let norms = f.column_norms();
            if norms[0] == 0.0 {
                return Err(LinalgError::NumericalBreakdown { column: 0 }.into());
            }
            let by_length = length_pass(e, f, &norms, params.cs, params.kappa_bar);
            let (by_angle, _) = angle_pass(&by_length.e, &by_length.f, params.cs)?;
            Ok(FilterOutcome {
                kept_mask: compose_masks(&by_length.kept_mask, &by_angle.kept_mask),
                c_f_estimate: by_length.c_f_estimate,
                ..by_angle
            })
        }
        FilterOrder::AngleThenLength => {
            let (by_angle, sines) = angle_pass(e, f, params.cs)?;
            let cs = if params.sharpen && !sines.is_empty() {
                sines.iter().cloned().fold(f64::INFINITY, f64::min)
            } else {
                params.cs
            };
            let by_length = length_pass(
                &by_angle.e,
                &by_angle.f,
                &by_angle.f.column_norms(),
                cs,
                params.kappa_bar,
            );
            let k = by_length.depth();
            let qr = by_angle.qr.as_ref().map(|qr| qr.truncate(k));
            Ok(FilterOutcome {
                kept_mask: compose_masks(&by_angle.kept_mask, &by_length.kept_mask),
                qr,
                ..by_length
            })
        }
    }
}

/// Truncated-SVD least-squares solution.
#[derive(Debug, Clone)]
pub struct TsvdSolution<T> {
    /// Coefficients, one per column of `F`.
    pub gamma: Vec<T>,
    /// Number of retained singular values `s`.
    pub rank: usize,
    pub singular_values: Vec<f64>,
}

impl<T> TsvdSolution<T> {
    /// `sigma_1 / sigma_s` over the retained values.
    pub fn singular_value_ratio(&self) -> f64 {
        if self.rank == 0 {
            return 0.0;
        }
        self.singular_values[0] / self.singular_values[self.rank - 1]
    }

    /// Frobenius condition of the rank-`s` operator actually inverted.
    pub fn truncated_frobenius_cond(&self) -> f64 {
        let kept = &self.singular_values[..self.rank];
        let a: f64 = kept.iter().map(|s| s * s).sum();
        let b: f64 = kept.iter().map(|s| 1.0 / (s * s)).sum();
        (a * b).sqrt()
    }
}

/// `gamma = V_s Sigma_s^{-1} U_s* Q* w` with `s` the largest index for which
/// `sigma_1 / sigma_s < kappa_bar`.
pub fn tsvd_solve<T: Scalar>(
    f: &Matrix<T>,
    w: &[T],
    kappa_bar: f64,
) -> Result<TsvdSolution<T>, FilterError> {
    if !(kappa_bar > 1.0) {
        return Err(FilterError::InvalidKappa(kappa_bar));
    }
    if f.cols() == 0 || f.rows() < f.cols() {
        return Err(LinalgError::Shape {
            rows: f.rows(),
            cols: f.cols(),
        }
        .into());
    }
    if w.len() != f.rows() {
        return Err(LinalgError::Dimension {
            expected: f.rows(),
            found: w.len(),
        }
        .into());
    }
    let (qr, _) = householder_qr(f);
    let svd = small_svd(&qr.r)?;
    let sv = &svd.singular_values;
    let m = sv.len();
    let rank = if sv[0] > 0.0 {
        sv.iter().take_while(|&&s| s > 0.0 && sv[0] / s < kappa_bar).count()
    } else {
        0
    };

    let qtw = qr.q.adjoint_matvec(w);
    let mut gamma = vec![T::zero(); m];
    for j in 0..rank {
        let coef = crate::linalg::dot(svd.u.col(j), &qtw).scale(1.0 / sv[j]);
        for (g, &vij) in gamma.iter_mut().zip(svd.v.col(j)) {
            *g += vij * coef;
        }
    }
    Ok(TsvdSolution {
        gamma,
        rank,
        singular_values: svd.singular_values,
    })
}
