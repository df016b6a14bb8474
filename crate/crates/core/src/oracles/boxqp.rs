use super::prox::clamp_unchecked;
use super::CompositeObjective;
use crate::error::{check_dim, Error, Result};
use crate::{Matrix, Vector};

/// `½xᵀQx + qᵀx` subject to `lower ≤ x ≤ upper`.
#[derive(Debug, Clone, PartialEq)]
pub struct BoxQp {
    q_matrix: Matrix,
    q: Vector,
    lower: Vector,
    upper: Vector,
    /// Ascending spectrum of `Q`.
    eigenvalues: Vec<f64>,
}

impl BoxQp {
    pub fn new(q_matrix: Matrix, q: Vector, lower: Vector, upper: Vector, eigenvalues: Vec<f64>) -> Result<Self> {
        let n = q.len();
        if q_matrix.nrows() != n || q_matrix.ncols() != n {
            return Err(Error::input("Q must be square and match q"));
        }
        check_dim("box lower", n, lower.len())?;
        check_dim("box upper", n, upper.len())?;
        check_dim("Q spectrum", n, eigenvalues.len())?;
        if (0..n).any(|i| !(lower[i] < upper[i])) {
            return Err(Error::input("box bounds must satisfy lower < upper"));
        }
        if eigenvalues.iter().any(|&l| !(l > 0.0)) {
            return Err(Error::input("Q must be positive definite"));
        }
        Ok(Self {
            q_matrix,
            q,
            lower,
            upper,
            eigenvalues,
        })
    }

    pub fn q_matrix(&self) -> &Matrix {
        &self.q_matrix
    }

    pub fn q(&self) -> &Vector {
        &self.q
    }

    pub fn lower(&self) -> &Vector {
        &self.lower
    }

    pub fn upper(&self) -> &Vector {
        &self.upper
    }

    pub fn eigenvalues(&self) -> &[f64] {
        &self.eigenvalues
    }

    pub fn condition_number(&self) -> f64 {
        self.lipschitz() / self.eigenvalues[0]
    }

    pub fn is_feasible(&self, x: &Vector) -> bool {
        x.iter()
            .zip(self.lower.iter().zip(self.upper.iter()))
            .all(|(&v, (&lo, &hi))| lo <= v && v <= hi)
    }

    /// Coordinates within `tol` of a bound.
    pub fn active_constraints(&self, x: &Vector, tol: f64) -> usize {
        x.iter()
            .zip(self.lower.iter().zip(self.upper.iter()))
            .filter(|(&v, (&lo, &hi))| v - lo <= tol || hi - v <= tol)
            .count()
    }
}

impl CompositeObjective for BoxQp {
    fn dim(&self) -> usize {
        self.q.len()
    }

    fn smooth_value(&self, x: &Vector) -> f64 {
        0.5 * x.dot(&(&self.q_matrix * x)) + self.q.dot(x)
    }

    fn smooth_gradient(&self, x: &Vector) -> Vector {
        &self.q_matrix * x + &self.q
    }

    fn nonsmooth_value(&self, x: &Vector) -> f64 {
        if self.is_feasible(x) {
            0.0
        } else {
            f64::INFINITY
        }
    }

    fn prox(&self, v: &Vector, _t: f64) -> Vector {
        clamp_unchecked(v, &self.lower, &self.upper)
    }

    fn lipschitz(&self) -> f64 {
        *self.eigenvalues.last().expect("nonempty spectrum")
    }
}
