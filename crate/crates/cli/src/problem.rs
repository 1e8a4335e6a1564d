//! Builds benchmark problems from their configuration block.

use faa_core::problems::{
    LinearToy, NlhParams, NonlinearHelmholtz, PLapParams, PLaplace, Quasilinear,
    QuasilinearParams, RealView,
};
use faa_core::{Complex64, FixedPointProblem, ProblemError};

use crate::config::{FieldName, ProblemName, ProblemSpec};
use crate::error::HarnessError;

pub const LINEAR_TOY_N: usize = 100;
pub const LINEAR_TOY_RHO: f64 = 0.9;
pub const LINEAR_TOY_SEED: u64 = 0;

/// A problem over the field its accelerator coefficients live in.
pub enum BuiltProblem {
    Real(Box<dyn FixedPointProblem<f64>>),
    Complex(Box<dyn FixedPointProblem<Complex64>>),
}

impl BuiltProblem {
    pub fn description(&self) -> String {
        match self {
            Self::Real(p) => p.description(),
            Self::Complex(p) => p.description(),
        }
    }

    pub fn beta_star(&self) -> Option<f64> {
        match self {
            Self::Real(p) => p.beta_star(),
            Self::Complex(p) => p.beta_star(),
        }
    }
}

fn invalid(e: ProblemError) -> HarnessError {
    HarnessError::config(format!("problem parameters: {e}"))
}

pub fn build(spec: &ProblemSpec) -> Result<BuiltProblem, HarnessError> {
    Ok(match spec.validate()? {
        ProblemName::LinearToy => {
            let n = spec.n.unwrap_or(LINEAR_TOY_N);
            let rho = spec.rho.unwrap_or(LINEAR_TOY_RHO);
            if n == 0 {
                return Err(HarnessError::config("key `problem.n` must be positive"));
            }
            if !(rho.is_finite() && rho >= 0.0) {
                return Err(HarnessError::config("key `problem.rho` must be finite and >= 0"));
            }
            let toy = LinearToy::contraction(n, rho, spec.seed.unwrap_or(LINEAR_TOY_SEED));
            BuiltProblem::Real(Box::new(toy))
        }
        ProblemName::Nlh => {
            let d = NlhParams::default();
            let params = NlhParams {
                k0: spec.k0.unwrap_or(d.k0),
                eps: spec.eps.unwrap_or(d.eps),
                nodes: spec.nodes.unwrap_or(d.nodes),
                length: d.length,
            };
            let nlh = NonlinearHelmholtz::new(params).map_err(invalid)?;
            match spec.field.unwrap_or(FieldName::Real) {
                FieldName::Real => BuiltProblem::Real(Box::new(RealView::new(nlh))),
                FieldName::Complex => BuiltProblem::Complex(Box::new(nlh)),
            }
        }
        ProblemName::Quasilinear => {
            let d = QuasilinearParams::default();
            let params = QuasilinearParams {
                subdivisions: spec.subdivisions.unwrap_or(d.subdivisions),
                forcing: spec.forcing.unwrap_or(d.forcing),
                diffusivity: d.diffusivity,
            };
            BuiltProblem::Real(Box::new(Quasilinear::new(params).map_err(invalid)?))
        }
        ProblemName::Plap => {
            let d = PLapParams::default();
            let params = PLapParams {
                p: spec.p.unwrap_or(d.p),
                eps: spec.eps_reg.unwrap_or(d.eps),
                forcing: spec.forcing.unwrap_or(d.forcing),
                subdivisions: spec.subdivisions.unwrap_or(d.subdivisions),
            };
            BuiltProblem::Real(Box::new(PLaplace::new(params).map_err(invalid)?))
        }
    })
}
