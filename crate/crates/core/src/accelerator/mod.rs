//! Anderson acceleration drivers (plain, filtered, TSVD) with per-iteration
//! telemetry.
//!
//! Notation: `x_k` is the iterate, `w_{k+1} = g(x_k) - x_k` the residual,
//! `E` holds iterate differences and `F` residual differences, newest column
//! first. Iteration `k` evaluates `w_{k+1}`, stops if it is below tolerance,
//! and otherwise produces
//!
//! ```text
//! x_{k+1} = x_k + beta w_{k+1} - (E + beta F) gamma
//! ```
//!
//! with `gamma` minimizing `|F gamma - w_{k+1}|`. Iteration 0 is a damped
//! fixed-point step and iteration 1 a depth-one step solved through the
//! normal equation; strategies only differ from iteration 2 on.

mod config;

pub use config::{
    dynamic_cs, BetaSchedule, CsSchedule, DepthSchedule, DepthScheduler, SolverConfig, Strategy,
};

use thiserror::Error;

use crate::filtering::{condition_filter, tsvd_solve, FilterError};
use crate::linalg::{
    dot, economy_qr, frobenius_cond_from_r, least_squares_solve, norm2, sub, LinalgError, Matrix,
    Scalar,
};
use crate::problems::{FixedPointProblem, ProblemError};

/// Residual norm beyond which a run is declared diverged.
pub const DIVERGENCE_THRESHOLD: f64 = 1e15;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SolveError {
    #[error("invalid solver configuration: {0}")]
    InvalidConfig(String),
    #[error("initial iterate has length {found}, problem dimension is {expected}")]
    Dimension { expected: usize, found: usize },
    #[error("residual is zero; gain is undefined")]
    ZeroResidual,
    #[error(transparent)]
    Linalg(#[from] LinalgError),
    #[error(transparent)]
    Filter(#[from] FilterError),
    #[error(transparent)]
    Problem(#[from] ProblemError),
}

/// Telemetry for one iteration `k`.
#[derive(Debug, Clone, PartialEq)]
pub struct IterationRecord {
    pub k: usize,
    /// `|w_{k+1}|`.
    pub residual_norm: f64,
    /// Optimization gain `|F gamma - w| / |w|`; 1 when no solve happened.
    pub theta: f64,
    /// Frobenius condition of the matrix actually used; 0 without a solve.
    pub cond_f: f64,
    /// `sigma_1 / sigma_s` for TSVD solves.
    pub sv_ratio: Option<f64>,
    /// Depth after filtering.
    pub depth: usize,
    /// Kept flags over the pre-filter columns, newest first.
    pub kept_mask: Vec<bool>,
    pub cs_used: f64,
    pub beta_used: f64,
}

impl IterationRecord {
    pub fn pre_filter_depth(&self) -> usize {
        self.kept_mask.len()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RunStatus {
    Converged,
    MaxIters,
    Diverged,
}

#[derive(Debug, Clone)]
pub struct RunTrace<T> {
    pub records: Vec<IterationRecord>,
    pub status: RunStatus,
    /// The last iterate whose residual was evaluated.
    pub final_x: Vec<T>,
}

impl<T> RunTrace<T> {
    pub fn converged(&self) -> bool {
        self.status == RunStatus::Converged
    }

    /// Index `k` of the last record: iterations taken.
    pub fn iters(&self) -> usize {
        self.records.last().map_or(0, |r| r.k)
    }

    pub fn final_residual(&self) -> f64 {
        self.records.last().map_or(f64::NAN, |r| r.residual_norm)
    }

    pub fn max_cond(&self) -> f64 {
        self.records.iter().map(|r| r.cond_f).fold(0.0, f64::max)
    }
}

/// `w = g(x) - x`.
pub fn residual<T: Scalar>(g_output: &[T], x: &[T]) -> Vec<T> {
    sub(g_output, x)
}

/// `|F gamma - w| / |w|`.
pub fn gain<T: Scalar>(f: &Matrix<T>, gamma: &[T], w: &[T]) -> Result<f64, SolveError> {
    let wn = norm2(w);
    if wn == 0.0 {
        return Err(SolveError::ZeroResidual);
    }
    let fg = if f.cols() == 0 {
        vec![T::zero(); w.len()]
    } else {
        f.matvec(gamma)
    };
    Ok(norm2(&sub(&fg, w)) / wn)
}

/// `x + beta w - (E + beta F) gamma`.
pub fn aa_update<T: Scalar>(
    x: &[T],
    w: &[T],
    e: &Matrix<T>,
    f: &Matrix<T>,
    gamma: &[T],
    beta: f64,
) -> Vec<T> {
    assert_eq!(e.cols(), gamma.len());
    assert_eq!(f.cols(), gamma.len());
    let b = T::from_real(beta);
    let mut out: Vec<T> = x.iter().zip(w).map(|(&xi, &wi)| xi + b * wi).collect();
    for (j, &g) in gamma.iter().enumerate() {
        let bg = b * g;
        for ((o, &ej), &fj) in out.iter_mut().zip(e.col(j)).zip(f.col(j)) {
            *o -= g * ej + bg * fj;
        }
    }
    out
}

/// What one least-squares step produced.
struct Step<T> {
    gamma: Vec<T>,
    cond_f: f64,
    sv_ratio: Option<f64>,
    kept_mask: Vec<bool>,
}

/// Runs the configured acceleration from `x0` until the residual norm drops
/// below `config.tol`, diverges, or `config.max_iters` iterations pass.
///
/// Non-convergence is reported through [`RunTrace::status`]; errors are
/// reserved for invalid input and numerical failures.
pub fn solve<T: Scalar, P: FixedPointProblem<T> + ?Sized>(
    problem: &P,
    config: &SolverConfig,
    x0: &[T],
) -> Result<RunTrace<T>, SolveError> {
    config.validate()?;
    let n = problem.dim();
    if x0.len() != n {
        return Err(SolveError::Dimension {
            expected: n,
            found: x0.len(),
        });
    }

    let mut depth = DepthScheduler::new(config);
    let mut records = Vec::new();
    let mut e_hist = Matrix::<T>::zeros(n, 0);
    let mut f_hist = Matrix::<T>::zeros(n, 0);

    let mut x = x0.to_vec();
    let mut x_prev: Vec<T> = Vec::new();
    let mut w_prev: Vec<T> = Vec::new();

    for k in 0..=config.max_iters {
        let gx = problem.apply(&x)?;
        let w = residual(&gx, &x);
        let wn = norm2(&w);
        let beta = config.beta.beta(k);
        let cs = match config.strategy {
            Strategy::Faa => config.cs.cs(wn),
            _ => 0.0,
        };
        let mut record = IterationRecord {
            k,
            residual_norm: wn,
            theta: 1.0,
            cond_f: 0.0,
            sv_ratio: None,
            depth: 0,
            kept_mask: Vec::new(),
            cs_used: cs,
            beta_used: beta,
        };

        let status = if !wn.is_finite() || wn > DIVERGENCE_THRESHOLD {
            Some(RunStatus::Diverged)
        } else if wn < config.tol {
            Some(RunStatus::Converged)
        } else if k == config.max_iters {
            Some(RunStatus::MaxIters)
        } else {
            None
        };
        if let Some(status) = status {
            records.push(record);
            return Ok(RunTrace {
                records,
                status,
                final_x: x,
            });
        }

        let cap = depth.effective_depth(k, wn);
        if k >= 1 {
            let f_new = sub(&w, &w_prev);
            // A pair with w_{k+1} == w_k carries no secant information.
            if norm2(&f_new) > 0.0 {
                e_hist.prepend_column(&sub(&x, &x_prev));
                f_hist.prepend_column(&f_new);
            }
        }
        e_hist.truncate_columns(cap);
        f_hist.truncate_columns(cap);

        let x_next = if f_hist.cols() == 0 {
            aa_update(&x, &w, &e_hist, &f_hist, &[], beta)
        } else {
            let step = if k == 1 {
                normal_equation_step(&f_hist, &w)
            } else {
                match config.strategy {
                    Strategy::PlainAa => qr_step(&f_hist, &w)?,
                    Strategy::Faa => {
                        let out = condition_filter(&e_hist, &f_hist, &config.filter_params(cs))?;
                        let qr = out.qr.expect("angle pass always factors");
                        let gamma = least_squares_solve(&qr, &w)?;
                        let cond_f = frobenius_cond_from_r(out.f.frobenius_norm(), &qr.r)?;
                        e_hist = out.e;
                        f_hist = out.f;
                        Step {
                            gamma,
                            cond_f,
                            sv_ratio: None,
                            kept_mask: out.kept_mask,
                        }
                    }
                    Strategy::Tsvd => {
                        let t = tsvd_solve(&f_hist, &w, config.tsvd_cap())?;
                        Step {
                            cond_f: t.truncated_frobenius_cond(),
                            sv_ratio: Some(t.singular_value_ratio()),
                            kept_mask: vec![true; f_hist.cols()],
                            gamma: t.gamma,
                        }
                    }
                }
            };
            record.theta = gain(&f_hist, &step.gamma, &w)?;
            record.cond_f = step.cond_f;
            record.sv_ratio = step.sv_ratio;
            record.kept_mask = step.kept_mask;
            aa_update(&x, &w, &e_hist, &f_hist, &step.gamma, beta)
        };
        record.depth = f_hist.cols();
        records.push(record);

        x_prev = std::mem::replace(&mut x, x_next);
        w_prev = w;
    }
    unreachable!("the loop returns at k == max_iters")
}

/// Depth-one step through `F* F gamma = F* w`.
fn normal_equation_step<T: Scalar>(f: &Matrix<T>, w: &[T]) -> Step<T> {
    debug_assert_eq!(f.cols(), 1);
    let col = f.col(0);
    let gamma = dot(col, w) / dot(col, col);
    Step {
        gamma: vec![gamma],
        cond_f: 1.0,
        sv_ratio: None,
        kept_mask: vec![true],
    }
}

fn qr_step<T: Scalar>(f: &Matrix<T>, w: &[T]) -> Result<Step<T>, SolveError> {
    let qr = economy_qr(f)?;
    let gamma = least_squares_solve(&qr, w)?;
    Ok(Step {
        gamma,
        cond_f: frobenius_cond_from_r(f.frobenius_norm(), &qr.r)?,
        sv_ratio: None,
        kept_mask: vec![true; f.cols()],
    })
}
