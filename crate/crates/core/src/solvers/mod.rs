//! First-order solvers sharing one iteration loop.
//!
//! Every solver returns a [`Trace`] with `max_iters + 1` records at most, the
//! first describing the starting point. Runs stop early when the step residual
//! `‖yᵏ − xᵏ⁺¹‖/t` drops to `tol` or below.

mod backtracking;
mod driver;
mod trace;

pub use backtracking::backtracking_step;
pub use trace::{Trace, TraceRecord};

use driver::{run, BoxStepper, LassoStepper, Momentum, SmoothStepper};

use crate::error::{Error, Result};
use crate::momentum::{beta_star, FistaMomentum, MomentumState};
use crate::oracles::{BoxQp, LassoProblem, SmoothObjective};
use crate::restart::RestartPolicy;
use crate::Vector;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum StepSize {
    Fixed(f64),
    /// Halving line search started from the previous accepted step
    /// (from `initial` at the first iteration), so steps never increase.
    Backtracking {
        initial: f64,
    },
}

#[derive(Debug, Clone, PartialEq)]
pub struct SolverConfig {
    pub step_size: StepSize,
    /// Strong-convexity ratio `q = μ/L` for the scheme-I momentum.
    pub q: f64,
    pub max_iters: usize,
    pub tol: f64,
    pub restart: RestartPolicy,
    pub record_iterates: bool,
}

impl SolverConfig {
    pub fn new(step_size: StepSize) -> Self {
        Self {
            step_size,
            q: 0.0,
            max_iters: 1000,
            tol: 0.0,
            restart: RestartPolicy::none(),
            record_iterates: false,
        }
    }

    /// Fixed step `1/L`.
    pub fn for_lipschitz(l: f64) -> Self {
        Self::new(StepSize::Fixed(1.0 / l))
    }

    pub fn with_q(mut self, q: f64) -> Self {
        self.q = q;
        self
    }

    pub fn with_max_iters(mut self, max_iters: usize) -> Self {
        self.max_iters = max_iters;
        self
    }

    pub fn with_tol(mut self, tol: f64) -> Self {
        self.tol = tol;
        self
    }

    pub fn with_restart(mut self, restart: RestartPolicy) -> Self {
        self.restart = restart;
        self
    }

    pub fn recording_iterates(mut self) -> Self {
        self.record_iterates = true;
        self
    }

    fn validate(&self) -> Result<()> {
        if !(0.0..=1.0).contains(&self.q) {
            return Err(Error::input(format!("q must lie in [0, 1], got {}", self.q)));
        }
        if self.tol.is_nan() || self.tol < 0.0 {
            return Err(Error::input(format!(
                "tolerance must be non-negative, got {}",
                self.tol
            )));
        }
        Ok(())
    }
}

/// What a solver saw at iteration `k`, passed to observers before the
/// momentum step.
#[derive(Debug)]
pub struct StepEvent<'a> {
    pub k: usize,
    /// `xᵏ⁻¹`
    pub x_prev: &'a Vector,
    /// `xᵏ`
    pub x: &'a Vector,
    /// `yᵏ⁻¹`, the point the step was taken from.
    pub y_prev: &'a Vector,
    /// `∇f(yᵏ⁻¹)` for smooth problems.
    pub grad_y_prev: Option<&'a Vector>,
    pub f: f64,
    pub step: f64,
    pub restarted: bool,
}

fn ignore(_: &StepEvent<'_>) {}

pub fn gradient_descent<O: SmoothObjective + ?Sized>(obj: &O, x0: &Vector, config: &SolverConfig) -> Result<Trace> {
    config.validate()?;
    let mut stepper = SmoothStepper::new(obj, config.step_size)?;
    run(&mut stepper, &mut Momentum::Zero, x0, config, &mut ignore)
}

/// Accelerated gradient with the scheme-I momentum for `q = config.q`.
pub fn accelerated_scheme1<O: SmoothObjective + ?Sized>(obj: &O, x0: &Vector, config: &SolverConfig) -> Result<Trace> {
    accelerated_scheme1_with(obj, x0, config, ignore)
}

pub fn accelerated_scheme1_with<O, F>(obj: &O, x0: &Vector, config: &SolverConfig, mut observer: F) -> Result<Trace>
where
    O: SmoothObjective + ?Sized,
    F: FnMut(&StepEvent<'_>),
{
    config.validate()?;
    let mut stepper = SmoothStepper::new(obj, config.step_size)?;
    let mut momentum = Momentum::Scheme1(MomentumState::new(config.q)?);
    run(&mut stepper, &mut momentum, x0, config, &mut observer)
}

/// Accelerated gradient with the constant momentum `β*` for known `μ` and `L`.
///
/// Always steps with `1/L`; `config.step_size` is ignored.
pub fn accelerated_scheme2<O: SmoothObjective + ?Sized>(
    obj: &O,
    x0: &Vector,
    mu: f64,
    l: f64,
    config: &SolverConfig,
) -> Result<Trace> {
    accelerated_scheme2_with(obj, x0, mu, l, config, ignore)
}

pub fn accelerated_scheme2_with<O, F>(
    obj: &O,
    x0: &Vector,
    mu: f64,
    l: f64,
    config: &SolverConfig,
    mut observer: F,
) -> Result<Trace>
where
    O: SmoothObjective + ?Sized,
    F: FnMut(&StepEvent<'_>),
{
    config.validate()?;
    let beta = beta_star(mu, l)?;
    let mut stepper = SmoothStepper::new(obj, StepSize::Fixed(1.0 / l))?;
    run(&mut stepper, &mut Momentum::Constant(beta), x0, config, &mut observer)
}

pub fn ista(problem: &LassoProblem, x0: &Vector, config: &SolverConfig) -> Result<Trace> {
    config.validate()?;
    let mut stepper = LassoStepper::new(problem, config.step_size)?;
    run(&mut stepper, &mut Momentum::Zero, x0, config, &mut ignore)
}

/// FISTA; restarts reset `θ` to 1.
pub fn fista(problem: &LassoProblem, x0: &Vector, config: &SolverConfig) -> Result<Trace> {
    fista_with(problem, x0, config, ignore)
}

pub fn fista_with<F>(problem: &LassoProblem, x0: &Vector, config: &SolverConfig, mut observer: F) -> Result<Trace>
where
    F: FnMut(&StepEvent<'_>),
{
    config.validate()?;
    let mut stepper = LassoStepper::new(problem, config.step_size)?;
    let mut momentum = Momentum::Fista(FistaMomentum::default());
    run(&mut stepper, &mut momentum, x0, config, &mut observer)
}

pub fn projected_gradient(qp: &BoxQp, x0: &Vector, config: &SolverConfig) -> Result<Trace> {
    config.validate()?;
    let mut stepper = BoxStepper::new(qp, config.step_size)?;
    run(&mut stepper, &mut Momentum::Zero, x0, config, &mut ignore)
}

/// Accelerated projected gradient with the scheme-I momentum at `q = 0`.
///
/// A gradient restart policy uses the generalized test `(yᵏ⁻¹ − xᵏ)ᵀ(xᵏ − xᵏ⁻¹) > 0`.
pub fn accel_projected_gradient(qp: &BoxQp, x0: &Vector, config: &SolverConfig) -> Result<Trace> {
    accel_projected_gradient_with(qp, x0, config, ignore)
}

pub fn accel_projected_gradient_with<F>(
    qp: &BoxQp,
    x0: &Vector,
    config: &SolverConfig,
    mut observer: F,
) -> Result<Trace>
where
    F: FnMut(&StepEvent<'_>),
{
    config.validate()?;
    let mut stepper = BoxStepper::new(qp, config.step_size)?;
    let mut momentum = Momentum::Scheme1(MomentumState::new(0.0)?);
    run(&mut stepper, &mut momentum, x0, config, &mut observer)
}

/// Constant-momentum iteration with the configured fixed step.
pub(crate) fn constant_momentum<O: SmoothObjective + ?Sized>(
    obj: &O,
    x0: &Vector,
    beta: f64,
    config: &SolverConfig,
) -> Result<Trace> {
    config.validate()?;
    let mut stepper = SmoothStepper::new(obj, config.step_size)?;
    run(&mut stepper, &mut Momentum::Constant(beta), x0, config, &mut ignore)
}
