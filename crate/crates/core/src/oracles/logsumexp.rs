use nalgebra::SymmetricEigen;

use super::SmoothObjective;
use crate::error::{check_dim, Error, Result};
use crate::{Matrix, Vector};

/// Smoothed max: `f(x) = ρ log Σᵢ exp((aᵢᵀx − bᵢ)/ρ)`.
///
/// Rows of `a` are the vectors `aᵢ`. Convex and smooth, not strongly convex;
/// the gradient is `Aᵀw` with `w` the softmax weights.
#[derive(Debug, Clone, PartialEq)]
pub struct LogSumExp {
    a: Matrix,
    b: Vector,
    rho: f64,
    lipschitz: f64,
}

impl LogSumExp {
    pub fn new(a: Matrix, b: Vector, rho: f64) -> Result<Self> {
        if !(rho > 0.0 && rho.is_finite()) {
            return Err(Error::input(format!("rho must be positive, got {rho}")));
        }
        check_dim("log-sum-exp offsets", a.nrows(), b.len())?;
        if a.ncols() == 0 || a.nrows() == 0 {
            return Err(Error::input("log-sum-exp needs m, n >= 1"));
        }
        // Hessian is Aᵀ(diag(w) − wwᵀ)A/ρ ⪯ AᵀA/ρ.
        let gram = a.tr_mul(&a);
        let sigma_max_sq = SymmetricEigen::new(gram).eigenvalues.max().max(0.0);
        let lipschitz = sigma_max_sq / rho;
        Ok(Self { a, b, rho, lipschitz })
    }

    pub fn a(&self) -> &Matrix {
        &self.a
    }

    pub fn b(&self) -> &Vector {
        &self.b
    }

    pub fn rho(&self) -> f64 {
        self.rho
    }

    pub fn num_terms(&self) -> usize {
        self.a.nrows()
    }

    fn scaled_residuals(&self, x: &Vector) -> Vector {
        (&self.a * x - &self.b) / self.rho
    }

    /// Softmax weights `wᵢ ∝ exp((aᵢᵀx − bᵢ)/ρ)`, summing to one.
    pub fn weights(&self, x: &Vector) -> Vector {
        let z = self.scaled_residuals(x);
        let zmax = z.max();
        let mut w = z.map(|zi| (zi - zmax).exp());
        let total = w.sum();
        w /= total;
        w
    }
}

impl SmoothObjective for LogSumExp {
    fn dim(&self) -> usize {
        self.a.ncols()
    }

    fn value(&self, x: &Vector) -> f64 {
        let z = self.scaled_residuals(x);
        let zmax = z.max();
        let sum: f64 = z.iter().map(|zi| (zi - zmax).exp()).sum();
        self.rho * (zmax + sum.ln())
    }

    fn gradient(&self, x: &Vector) -> Vector {
        self.a.tr_mul(&self.weights(x))
    }

    fn lipschitz(&self) -> Option<f64> {
        Some(self.lipschitz)
    }
}
