//! The shared accelerated iteration.
//!
//! Each iteration: forward step `xᵏ = step(yᵏ⁻¹)`, restart test, momentum update,
//! extrapolation `yᵏ = xᵏ + βₖ(xᵏ − xᵏ⁻¹)`. On restart the extrapolation is
//! skipped (`yᵏ = xᵏ`) and θ is reset, so the following step is a plain
//! (proximal/projected) gradient step.

use super::backtracking::backtrack;
use super::{SolverConfig, StepEvent, StepSize, Trace, TraceRecord};
use crate::error::{Error, Result};
use crate::momentum::{FistaMomentum, MomentumState};
use crate::oracles::{BoxQp, CompositeObjective, LassoProblem, LassoWorkspace, OperatorCounts, SmoothObjective};
use crate::restart::{generalized_inner, gradient_inner, RestartProbe};
use crate::Vector;

pub(crate) enum Momentum {
    Zero,
    Scheme1(MomentumState),
    Constant(f64),
    Fista(FistaMomentum),
}

impl Momentum {
    fn advance(&mut self) -> f64 {
        match self {
            Momentum::Zero => 0.0,
            Momentum::Scheme1(m) => m.advance(),
            Momentum::Constant(b) => *b,
            Momentum::Fista(m) => m.advance(),
        }
    }

    fn reset(&mut self) {
        match self {
            Momentum::Scheme1(m) => m.reset(),
            Momentum::Fista(m) => m.reset(),
            Momentum::Zero | Momentum::Constant(_) => {}
        }
    }
}

pub(crate) struct Forward {
    pub x_next: Vector,
    pub f_next: f64,
    pub step: f64,
    /// `∇f(y)` for smooth problems; composite problems use the generalized test.
    pub grad_y: Option<Vector>,
}

pub(crate) trait Stepper {
    fn dim(&self) -> usize;
    /// Objective at `x⁰`; primes caches for `x = y = x⁰`.
    fn start(&mut self, x0: &Vector) -> Result<f64>;
    fn forward(&mut self, y: &Vector) -> Result<Forward>;
    /// Notifies that `y ← x⁺ + β(x⁺ − x)` and `x ← x⁺`.
    fn extrapolated(&mut self, _beta: f64) {}
    fn operator_counts(&self) -> Option<OperatorCounts> {
        None
    }
}

fn partial(records: &[TraceRecord], x: &Vector, iterates: &[Vector], counts: Option<OperatorCounts>) -> Box<Trace> {
    Box::new(Trace {
        records: records.to_vec(),
        final_x: x.clone(),
        f_star_ref: None,
        iterates: iterates.to_vec(),
        operator_counts: counts,
        converged: false,
    })
}

fn with_partial(err: Error, trace: Box<Trace>) -> Error {
    match err {
        Error::Numeric { message, .. } => Error::Numeric {
            message,
            partial: Some(trace),
        },
        other => other,
    }
}

pub(crate) fn run<S: Stepper>(
    stepper: &mut S,
    momentum: &mut Momentum,
    x0: &Vector,
    config: &SolverConfig,
    observer: &mut dyn FnMut(&StepEvent<'_>),
) -> Result<Trace> {
    if x0.len() != stepper.dim() {
        return Err(Error::input(format!(
            "starting point has dimension {}, problem has {}",
            x0.len(),
            stepper.dim()
        )));
    }
    let mut policy = config.restart.fresh();
    let use_gradient_test = policy.is_gradient_based();

    let f0 = stepper.start(x0)?;
    if !f0.is_finite() {
        return Err(Error::numeric(format!("objective at the starting point is {f0}")));
    }
    let mut records = Vec::with_capacity(config.max_iters + 1);
    records.push(TraceRecord {
        k: 0,
        f: f0,
        beta: 0.0,
        step: 0.0,
        restarted: false,
    });
    let mut iterates = Vec::new();
    if config.record_iterates {
        iterates.push(x0.clone());
    }

    let mut x = x0.clone();
    let mut y = x0.clone();
    let mut f = f0;
    let mut converged = false;

    for k in 1..=config.max_iters {
        let fw = match stepper.forward(&y) {
            Ok(fw) => fw,
            Err(e) => {
                return Err(with_partial(
                    e,
                    partial(&records, &x, &iterates, stepper.operator_counts()),
                ))
            }
        };
        if !fw.f_next.is_finite() || fw.x_next.iter().any(|v| !v.is_finite()) {
            return Err(Error::Numeric {
                message: format!("iteration {k} diverged (f = {})", fw.f_next),
                partial: Some(partial(&records, &x, &iterates, stepper.operator_counts())),
            });
        }

        let gradient_inner = if use_gradient_test {
            match &fw.grad_y {
                Some(g) => gradient_inner(g, &fw.x_next, &x),
                None => generalized_inner(&y, &fw.x_next, &x),
            }
        } else {
            0.0
        };
        let restarted = policy.step(&RestartProbe {
            f_curr: fw.f_next,
            f_prev: f,
            gradient_inner,
        });

        observer(&StepEvent {
            k,
            x_prev: &x,
            x: &fw.x_next,
            y_prev: &y,
            grad_y_prev: fw.grad_y.as_ref(),
            f: fw.f_next,
            step: fw.step,
            restarted,
        });

        let residual = (&y - &fw.x_next).norm() / fw.step;

        let beta = if restarted {
            momentum.reset();
            0.0
        } else {
            momentum.advance()
        };
        let y_next = if beta == 0.0 {
            fw.x_next.clone()
        } else {
            let mut d = &fw.x_next - &x;
            d *= beta;
            d += &fw.x_next;
            d
        };
        stepper.extrapolated(beta);

        x = fw.x_next;
        y = y_next;
        f = fw.f_next;
        records.push(TraceRecord {
            k,
            f,
            beta,
            step: fw.step,
            restarted,
        });
        if config.record_iterates {
            iterates.push(x.clone());
        }
        if residual <= config.tol {
            converged = true;
            break;
        }
    }

    Ok(Trace {
        records,
        final_x: x,
        f_star_ref: None,
        iterates,
        operator_counts: stepper.operator_counts(),
        converged,
    })
}

/// Gradient steps on a smooth objective, fixed or backtracking.
pub(crate) struct SmoothStepper<'a, O: ?Sized> {
    obj: &'a O,
    step: StepSize,
    t: f64,
}

impl<'a, O: SmoothObjective + ?Sized> SmoothStepper<'a, O> {
    pub fn new(obj: &'a O, step: StepSize) -> Result<Self> {
        let t = match step {
            StepSize::Fixed(t) => {
                check_fixed_step(t, obj.lipschitz())?;
                t
            }
            StepSize::Backtracking { initial } => {
                if !(initial > 0.0 && initial.is_finite()) {
                    return Err(Error::input(format!("initial step must be positive, got {initial}")));
                }
                initial
            }
        };
        Ok(Self { obj, step, t })
    }
}

pub(crate) fn check_fixed_step(t: f64, lipschitz: Option<f64>) -> Result<()> {
    if !(t > 0.0 && t.is_finite()) {
        return Err(Error::input(format!("step size must be positive, got {t}")));
    }
    if let Some(l) = lipschitz {
        if t * l > 1.0 + 1e-12 {
            return Err(Error::input(format!("step size {t} exceeds 1/L = {}", 1.0 / l)));
        }
    }
    Ok(())
}

impl<O: SmoothObjective + ?Sized> Stepper for SmoothStepper<'_, O> {
    fn dim(&self) -> usize {
        self.obj.dim()
    }

    fn start(&mut self, x0: &Vector) -> Result<f64> {
        Ok(self.obj.value(x0))
    }

    fn forward(&mut self, y: &Vector) -> Result<Forward> {
        let g = self.obj.gradient(y);
        match self.step {
            StepSize::Fixed(t) => {
                let x_next = y - &g * t;
                let f_next = self.obj.value(&x_next);
                Ok(Forward {
                    x_next,
                    f_next,
                    step: t,
                    grad_y: Some(g),
                })
            }
            StepSize::Backtracking { .. } => {
                let fy = self.obj.value(y);
                let (t, x_next, f_next) = backtrack(self.obj, y, fy, &g, self.t)?;
                self.t = t;
                Ok(Forward {
                    x_next,
                    f_next,
                    step: t,
                    grad_y: Some(g),
                })
            }
        }
    }
}

/// Proximal gradient steps on a lasso problem with `Ax` cached.
///
/// Per iteration this applies `Aᵀ` once (gradient at `y`) and `A` once (to the
/// new iterate); `Ay` for the next step is the combination
/// `(1 + β)Ax⁺ − βAx`, so evaluating the objective costs no extra product.
pub(crate) struct LassoStepper<'a> {
    ws: LassoWorkspace<'a>,
    t: f64,
    ax: Vector,
    ay: Vector,
    ax_next: Vector,
}

impl<'a> LassoStepper<'a> {
    pub fn new(problem: &'a LassoProblem, step: StepSize) -> Result<Self> {
        let t = match step {
            StepSize::Fixed(t) => t,
            StepSize::Backtracking { .. } => {
                return Err(Error::input("lasso solvers take a fixed step size"));
            }
        };
        check_fixed_step(t, Some(problem.lipschitz()))?;
        Ok(Self {
            ws: LassoWorkspace::new(problem),
            t,
            ax: Vector::zeros(0),
            ay: Vector::zeros(0),
            ax_next: Vector::zeros(0),
        })
    }
}

impl Stepper for LassoStepper<'_> {
    fn dim(&self) -> usize {
        self.ws.problem().dim()
    }

    fn start(&mut self, x0: &Vector) -> Result<f64> {
        self.ax = self.ws.apply(x0);
        self.ay = self.ax.clone();
        Ok(self.ws.problem().value_from_product(&self.ax, x0))
    }

    fn forward(&mut self, y: &Vector) -> Result<Forward> {
        let problem = self.ws.problem();
        let residual = &self.ay - problem.b();
        let g = self.ws.apply_adjoint(&residual);
        let x_next = problem.prox(&(y - g * self.t), self.t);
        self.ax_next = self.ws.apply(&x_next);
        let f_next = problem.value_from_product(&self.ax_next, &x_next);
        Ok(Forward {
            x_next,
            f_next,
            step: self.t,
            grad_y: None,
        })
    }

    fn extrapolated(&mut self, beta: f64) {
        let ax_next = std::mem::replace(&mut self.ax_next, Vector::zeros(0));
        self.ay = if beta == 0.0 {
            ax_next.clone()
        } else {
            &ax_next * (1.0 + beta) - &self.ax * beta
        };
        self.ax = ax_next;
    }

    fn operator_counts(&self) -> Option<OperatorCounts> {
        Some(self.ws.counts())
    }
}

/// Projected gradient steps on a box-constrained QP.
pub(crate) struct BoxStepper<'a> {
    qp: &'a BoxQp,
    t: f64,
}

impl<'a> BoxStepper<'a> {
    pub fn new(qp: &'a BoxQp, step: StepSize) -> Result<Self> {
        let t = match step {
            StepSize::Fixed(t) => t,
            StepSize::Backtracking { .. } => {
                return Err(Error::input("box-QP solvers take a fixed step size"));
            }
        };
        check_fixed_step(t, Some(qp.lipschitz()))?;
        Ok(Self { qp, t })
    }
}

impl Stepper for BoxStepper<'_> {
    fn dim(&self) -> usize {
        self.qp.dim()
    }

    fn start(&mut self, x0: &Vector) -> Result<f64> {
        if !self.qp.is_feasible(x0) {
            return Err(Error::input("starting point must satisfy the box constraints"));
        }
        Ok(self.qp.smooth_value(x0))
    }

    fn forward(&mut self, y: &Vector) -> Result<Forward> {
        let g = self.qp.smooth_gradient(y);
        let x_next = self.qp.prox(&(y - &g * self.t), self.t);
        let f_next = self.qp.smooth_value(&x_next);
        Ok(Forward {
            x_next,
            f_next,
            step: self.t,
            grad_y: None,
        })
    }
}
