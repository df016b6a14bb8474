//! Accelerated first-order methods with fixed and adaptive momentum restart.
//!
//! The crate is organised bottom-up:
//!
//! * [`oracles`]: objective oracles (quadratic, log-sum-exp, lasso, box-constrained
//!   QP), proximal and projection maps, and seeded instance generators.
//! * [`momentum`]: the θ/β sequences driving the accelerated schemes.
//! * [`restart`]: restart policies (none, fixed interval, function and gradient tests).
//! * [`solvers`]: gradient descent, the two accelerated schemes, ISTA/FISTA and
//!   (accelerated) projected gradient, all producing a [`Trace`].
//! * [`dynamics`]: per-eigenmode analysis of constant-momentum iterations on a
//!   quadratic, used both for prediction and as a closed-form test oracle.
//! * [`experiments`]: the seeded experiment lineups, trace measurements and export.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod dynamics;
pub mod error;
pub mod experiments;
pub mod momentum;
pub mod oracles;
pub mod restart;
pub mod solvers;

pub use error::{Error, Result};
pub use experiments::{ExperimentConfig, ExperimentKind, ExperimentOutput, RunSummary, Summary};
pub use momentum::{FistaMomentum, MomentumState};
pub use oracles::{BoxQp, CompositeObjective, LassoProblem, LogSumExp, Quadratic, SmoothObjective};
pub use restart::{RestartKind, RestartPolicy};
pub use solvers::{SolverConfig, StepSize, Trace, TraceRecord};

/// Dense column vector used throughout the crate.
pub type Vector = nalgebra::DVector<f64>;
/// Dense matrix used throughout the crate.
pub type Matrix = nalgebra::DMatrix<f64>;
