//! Filtered Anderson acceleration for fixed-point problems.
//!
//! The accelerator keeps the least-squares matrix of residual differences
//! well conditioned by dropping history columns that are short relative to
//! newer ones (length filter) or nearly parallel to them (angle filter).
//! Plain Anderson acceleration and a truncated-SVD variant are provided for
//! comparison.

// `!(x > 0.0)` rejects NaN on purpose; index loops mirror the formulas.
#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::needless_range_loop)]

pub mod accelerator;
pub mod filtering;
pub mod linalg;
pub mod problems;

pub use accelerator::{
    solve, BetaSchedule, CsSchedule, DepthSchedule, IterationRecord, RunStatus, RunTrace,
    SolveError, SolverConfig, Strategy,
};
pub use filtering::{condition_filter, FilterError, FilterOrder, FilterOutcome, FilterParams};
pub use linalg::{LinalgError, Matrix, Scalar};
pub use num_complex::Complex64;
pub use problems::{FixedPointProblem, ProblemError};
