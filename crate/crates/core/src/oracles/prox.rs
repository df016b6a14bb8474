use crate::error::{check_dim, Error, Result};
use crate::Vector;

/// Scalar soft-threshold `sign(x)·max(|x| − α, 0)`.
#[inline]
pub fn shrink(x: f64, alpha: f64) -> f64 {
    if x > alpha {
        x - alpha
    } else if x < -alpha {
        x + alpha
    } else {
        0.0
    }
}

/// Elementwise soft-thresholding, the proximal map of `α‖·‖₁`.
pub fn soft_threshold(v: &Vector, alpha: f64) -> Result<Vector> {
    if !(alpha >= 0.0) {
        return Err(Error::input(format!("soft-threshold level must be >= 0, got {alpha}")));
    }
    Ok(v.map(|x| shrink(x, alpha)))
}

/// Euclidean projection onto the box `[lower, upper]`.
pub fn project_box(z: &Vector, lower: &Vector, upper: &Vector) -> Result<Vector> {
    check_dim("project_box lower", z.len(), lower.len())?;
    check_dim("project_box upper", z.len(), upper.len())?;
    if let Some(i) = (0..z.len()).find(|&i| !(lower[i] < upper[i])) {
        return Err(Error::input(format!(
            "box bounds must satisfy lower < upper (coordinate {i}: {} >= {})",
            lower[i], upper[i]
        )));
    }
    Ok(clamp_unchecked(z, lower, upper))
}

pub(crate) fn clamp_unchecked(z: &Vector, lower: &Vector, upper: &Vector) -> Vector {
    Vector::from_iterator(
        z.len(),
        z.iter()
            .zip(lower.iter().zip(upper.iter()))
            .map(|(&v, (&lo, &hi))| v.clamp(lo, hi)),
    )
}
