//! Experiment harness for the filtered Anderson accelerator: configuration,
//! runs, comparisons, sweeps, and their artifacts.

pub mod artifacts;
pub mod compare;
pub mod config;
pub mod error;
pub mod plot;
pub mod problem;
pub mod runner;
pub mod sweep;

pub use config::{NumberOr, ProblemSpec, RunConfig, SolverSpec};
pub use error::HarnessError;
pub use runner::{execute, RunReport};
