//! Executes one configured run.

use faa_core::{solve, FixedPointProblem, IterationRecord, RunStatus, RunTrace, Scalar, SolverConfig};

use crate::config::RunConfig;
use crate::error::{HarnessError, EXIT_CONVERGED, EXIT_DIVERGED, EXIT_MAX_ITERS};
use crate::problem::{build, BuiltProblem};

/// Iterations inspected when deciding whether a non-converged run was
/// still making progress.
pub const TAIL_WINDOW: usize = 10;

/// Outcome of one run, independent of the coefficient field.
#[derive(Debug, Clone)]
pub struct RunReport {
    pub label: String,
    pub description: String,
    pub config: RunConfig,
    pub solver: SolverConfig,
    pub status: RunStatus,
    pub records: Vec<IterationRecord>,
}

impl RunReport {
    pub fn iterations(&self) -> usize {
        self.records.last().map_or(0, |r| r.k)
    }

    pub fn final_residual(&self) -> f64 {
        self.records.last().map_or(f64::NAN, |r| r.residual_norm)
    }

    pub fn max_cond(&self) -> f64 {
        self.records.iter().map(|r| r.cond_f).fold(0.0, f64::max)
    }

    /// Table entry: the iteration count, `>max_iters` when every one of the
    /// last few residuals is below 1, otherwise `F`.
    pub fn classification(&self) -> String {
        match self.status {
            RunStatus::Converged => self.iterations().to_string(),
            RunStatus::Diverged => "F".to_string(),
            RunStatus::MaxIters => {
                let start = self.records.len().saturating_sub(TAIL_WINDOW);
                if self.records[start..].iter().all(|r| r.residual_norm < 1.0) {
                    format!(">{}", self.solver.max_iters)
                } else {
                    "F".to_string()
                }
            }
        }
    }

    pub fn exit_code(&self) -> i32 {
        match self.status {
            RunStatus::Converged => EXIT_CONVERGED,
            RunStatus::MaxIters => EXIT_MAX_ITERS,
            RunStatus::Diverged => EXIT_DIVERGED,
        }
    }
}

pub fn status_name(status: RunStatus) -> &'static str {
    match status {
        RunStatus::Converged => "converged",
        RunStatus::MaxIters => "max_iters",
        RunStatus::Diverged => "diverged",
    }
}

fn run_on<T: Scalar>(
    problem: &dyn FixedPointProblem<T>,
    solver: &SolverConfig,
) -> Result<(RunStatus, Vec<IterationRecord>), HarnessError> {
    let RunTrace { records, status, .. } = solve(problem, solver, &problem.initial_guess())?;
    Ok((status, records))
}

pub fn execute(config: &RunConfig) -> Result<RunReport, HarnessError> {
    let problem = build(&config.problem)?;
    let solver = config.solver.resolve(problem.beta_star())?;
    let (status, records) = match &problem {
        BuiltProblem::Real(p) => run_on(p.as_ref(), &solver)?,
        BuiltProblem::Complex(p) => run_on(p.as_ref(), &solver)?,
    };
    Ok(RunReport {
        label: config.label(),
        description: problem.description(),
        config: config.clone(),
        solver,
        status,
        records,
    })
}
