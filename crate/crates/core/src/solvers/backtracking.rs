use crate::error::{Error, Result};
use crate::oracles::SmoothObjective;
use crate::Vector;

const SHRINK: f64 = 0.5;
const MIN_STEP: f64 = 1e-300;

/// Largest `t = t_init·2⁻ʲ` satisfying the sufficient-decrease condition
/// `f(y − t∇f(y)) ≤ f(y) + ∇f(y)ᵀ(x⁺ − y) + ‖x⁺ − y‖²/(2t)`.
///
/// Returns the accepted step and `x⁺`. Fails if the step underflows, which
/// happens only when the objective is not L-smooth near `y`.
pub fn backtracking_step<O: SmoothObjective + ?Sized>(obj: &O, y: &Vector, t_init: f64) -> Result<(f64, Vector)> {
    crate::error::check_dim("backtracking point", obj.dim(), y.len())?;
    if !(t_init > 0.0 && t_init.is_finite()) {
        return Err(Error::input(format!("initial step must be positive, got {t_init}")));
    }
    let fy = obj.value(y);
    let g = obj.gradient(y);
    let (t, x, _) = backtrack(obj, y, fy, &g, t_init)?;
    Ok((t, x))
}

pub(crate) fn backtrack<O: SmoothObjective + ?Sized>(
    obj: &O,
    y: &Vector,
    fy: f64,
    g: &Vector,
    t_init: f64,
) -> Result<(f64, Vector, f64)> {
    let mut t = t_init;
    loop {
        let x = y - g * t;
        let fx = obj.value(&x);
        let d = &x - y;
        let bound = fy + g.dot(&d) + d.norm_squared() / (2.0 * t);
        // Slack for rounding in the two objective evaluations.
        let slack = 8.0 * f64::EPSILON * fy.abs().max(fx.abs());
        if fx <= bound + slack {
            return Ok((t, x, fx));
        }
        t *= SHRINK;
        if t < MIN_STEP {
            return Err(Error::numeric("backtracking step underflowed"));
        }
    }
}
