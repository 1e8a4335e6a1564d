use crate::filtering::{FilterOrder, FilterParams};

use super::SolveError;

/// How the least-squares problem is conditioned.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Strategy {
    /// Anderson acceleration with an unfiltered QR solve.
    PlainAa,
    /// Length and angle filtering before the QR solve.
    Faa,
    /// Truncated SVD of the least-squares matrix.
    Tsvd,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum BetaSchedule {
    Constant(f64),
}

impl BetaSchedule {
    pub fn beta(&self, _k: usize) -> f64 {
        match *self {
            BetaSchedule::Constant(b) => b,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum CsSchedule {
    Constant(f64),
    /// `max(min(|w|^{1/2}, 2^{-1/2}), 0.1)` from the current residual norm.
    Dynamic,
}

impl CsSchedule {
    pub fn cs(&self, residual_norm: f64) -> f64 {
        match *self {
            CsSchedule::Constant(cs) => cs,
            CsSchedule::Dynamic => dynamic_cs(residual_norm),
        }
    }
}

/// Angle threshold that tightens while the residual is large.
pub fn dynamic_cs(w_norm: f64) -> f64 {
    w_norm.sqrt().min(0.5f64.sqrt()).max(0.1)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum DepthSchedule {
    /// Depth `m` throughout.
    Constant,
    /// Depth `m_early` until the residual first drops below `tau`, then
    /// `m_late` for the rest of the run.
    Multilevel {
        tau: f64,
        m_early: usize,
        m_late: usize,
    },
}

#[derive(Debug, Clone, PartialEq)]
pub struct SolverConfig {
    pub strategy: Strategy,
    /// Maximum depth `m` under [`DepthSchedule::Constant`].
    pub depth: usize,
    pub beta: BetaSchedule,
    pub cs: CsSchedule,
    pub depth_schedule: DepthSchedule,
    /// Condition cap for filtering.
    pub kappa_bar: f64,
    /// Singular-value ratio cap for TSVD; falls back to `kappa_bar`.
    pub tsvd_kappa: Option<f64>,
    pub order: FilterOrder,
    pub sharpen: bool,
    /// Converged once the residual norm is below this.
    pub tol: f64,
    pub max_iters: usize,
}

impl Default for SolverConfig {
    fn default() -> Self {
        Self {
            strategy: Strategy::Faa,
            depth: 10,
            beta: BetaSchedule::Constant(1.0),
            cs: CsSchedule::Constant(0.1),
            depth_schedule: DepthSchedule::Constant,
            kappa_bar: 1e8,
            tsvd_kappa: None,
            order: FilterOrder::LengthThenAngle,
            sharpen: false,
            tol: 1e-10,
            max_iters: 500,
        }
    }
}

impl SolverConfig {
    pub fn validate(&self) -> Result<(), SolveError> {
        let bad = |msg: String| Err(SolveError::InvalidConfig(msg));
        let BetaSchedule::Constant(beta) = self.beta;
        if !(beta > 0.0 && beta <= 1.0) {
            return bad(format!("beta must lie in (0, 1], got {beta}"));
        }
        if !(self.tol > 0.0) {
            return bad(format!("tol must be positive, got {}", self.tol));
        }
        if let CsSchedule::Constant(cs) = self.cs {
            if !(cs > 0.0 && cs <= 1.0) {
                return bad(format!("cs must lie in (0, 1], got {cs}"));
            }
        }
        if !(self.kappa_bar > 1.0) {
            return bad(format!("kappa must exceed 1, got {}", self.kappa_bar));
        }
        if let Some(k) = self.tsvd_kappa {
            if !(k > 1.0) {
                return bad(format!("tsvd kappa must exceed 1, got {k}"));
            }
        }
        if let DepthSchedule::Multilevel {
            tau,
            m_early,
            m_late,
        } = self.depth_schedule
        {
            if m_early > m_late {
                return bad(format!("multilevel depth needs m_early <= m_late, got {m_early} > {m_late}"));
            }
            if !(tau > 0.0) {
                return bad(format!("multilevel threshold must be positive, got {tau}"));
            }
        }
        Ok(())
    }

    pub fn tsvd_cap(&self) -> f64 {
        self.tsvd_kappa.unwrap_or(self.kappa_bar)
    }

    pub(crate) fn filter_params(&self, cs: f64) -> FilterParams {
        FilterParams {
            cs,
            kappa_bar: self.kappa_bar,
            order: self.order,
            sharpen: self.sharpen,
        }
    }
}

/// Tracks the depth cap across iterations; the multilevel switch latches.
#[derive(Debug, Clone)]
pub struct DepthScheduler {
    schedule: DepthSchedule,
    depth: usize,
    latched: bool,
}

impl DepthScheduler {
    pub fn new(config: &SolverConfig) -> Self {
        Self {
            schedule: config.depth_schedule,
            depth: config.depth,
            latched: false,
        }
    }

    /// Depth cap `m_k` for iteration `k` given the current residual norm.
    pub fn effective_depth(&mut self, k: usize, residual_norm: f64) -> usize {
        match self.schedule {
            DepthSchedule::Constant => k.min(self.depth),
            DepthSchedule::Multilevel {
                tau,
                m_early,
                m_late,
            } => {
                if residual_norm < tau {
                    self.latched = true;
                }
                k.min(if self.latched { m_late } else { m_early })
            }
        }
    }
}
