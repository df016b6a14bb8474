//! Objective oracles, proximal maps and seeded instance generators.

mod boxqp;
mod generate;
mod instance;
mod lasso;
mod logsumexp;
mod prox;
mod quadratic;

pub use boxqp::BoxQp;
pub use generate::{
    gen_boxqp, gen_lasso, gen_logsumexp, gen_quadratic, log_uniform_spectrum, random_orthogonal, seeded_rng,
    standard_normal_vector, BOXQP_SPECTRUM_FLOOR,
};
pub use instance::{Instance, InstanceDocument};
pub use lasso::{LassoProblem, LassoWorkspace, OperatorCounts};
pub use logsumexp::LogSumExp;
pub use prox::{project_box, shrink, soft_threshold};
pub use quadratic::Quadratic;

use crate::error::{check_dim, Result};
use crate::Vector;

/// A smooth convex function with a value/gradient oracle.
///
/// `value` and `gradient` assume `x.len() == self.dim()`; use [`eval_value`] and
/// [`eval_grad`] at API boundaries where the dimension is not already known to match.
pub trait SmoothObjective {
    fn dim(&self) -> usize;
    fn value(&self, x: &Vector) -> f64;
    fn gradient(&self, x: &Vector) -> Vector;

    /// Lipschitz constant of the gradient, when known.
    fn lipschitz(&self) -> Option<f64> {
        None
    }
}

/// A composite objective `g(x) + h(x)`: smooth `g`, and `h` with a cheap proximal map.
pub trait CompositeObjective {
    fn dim(&self) -> usize;
    fn smooth_value(&self, x: &Vector) -> f64;
    fn smooth_gradient(&self, x: &Vector) -> Vector;
    /// Value of the nonsmooth part; `+inf` outside the domain of an indicator.
    fn nonsmooth_value(&self, x: &Vector) -> f64;
    /// Proximal map of `t * h` evaluated at `v`.
    fn prox(&self, v: &Vector, t: f64) -> Vector;
    /// Lipschitz constant of the smooth part's gradient.
    fn lipschitz(&self) -> f64;

    fn value(&self, x: &Vector) -> f64 {
        self.smooth_value(x) + self.nonsmooth_value(x)
    }
}

/// The smooth part of a composite objective, viewed as a [`SmoothObjective`].
pub struct SmoothPart<'a, C: ?Sized>(pub &'a C);

impl<C: CompositeObjective + ?Sized> SmoothObjective for SmoothPart<'_, C> {
    fn dim(&self) -> usize {
        self.0.dim()
    }

    fn value(&self, x: &Vector) -> f64 {
        self.0.smooth_value(x)
    }

    fn gradient(&self, x: &Vector) -> Vector {
        self.0.smooth_gradient(x)
    }

    fn lipschitz(&self) -> Option<f64> {
        Some(self.0.lipschitz())
    }
}

/// `f(x)` with a dimension check.
pub fn eval_value<O: SmoothObjective + ?Sized>(obj: &O, x: &Vector) -> Result<f64> {
    check_dim("eval_value", obj.dim(), x.len())?;
    Ok(obj.value(x))
}

/// `∇f(x)` with a dimension check.
pub fn eval_grad<O: SmoothObjective + ?Sized>(obj: &O, x: &Vector) -> Result<Vector> {
    check_dim("eval_grad", obj.dim(), x.len())?;
    Ok(obj.gradient(x))
}
