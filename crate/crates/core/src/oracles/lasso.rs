use nalgebra::SymmetricEigen;
use serde::{Deserialize, Serialize};

use super::prox::shrink;
use super::CompositeObjective;
use crate::error::{check_dim, Error, Result};
use crate::{Matrix, Vector};

/// `½‖Ax − b‖² + ρ‖x‖₁`.
#[derive(Debug, Clone, PartialEq)]
pub struct LassoProblem {
    a: Matrix,
    b: Vector,
    rho: f64,
    /// `λ_max(AᵀA)`.
    lipschitz: f64,
    /// Sparse signal the instance was generated from, when known.
    signal: Option<Vector>,
}

impl LassoProblem {
    pub fn new(a: Matrix, b: Vector, rho: f64) -> Result<Self> {
        if !(rho > 0.0 && rho.is_finite()) {
            return Err(Error::input(format!("rho must be positive, got {rho}")));
        }
        check_dim("lasso observations", a.nrows(), b.len())?;
        if a.nrows() == 0 || a.ncols() == 0 {
            return Err(Error::input("lasso needs m, n >= 1"));
        }
        // The smaller Gram matrix has the same nonzero spectrum.
        let gram = if a.nrows() <= a.ncols() {
            &a * a.transpose()
        } else {
            a.tr_mul(&a)
        };
        let lipschitz = SymmetricEigen::new(gram).eigenvalues.max().max(0.0);
        Ok(Self {
            a,
            b,
            rho,
            lipschitz,
            signal: None,
        })
    }

    pub(crate) fn with_signal(mut self, signal: Vector) -> Self {
        self.signal = Some(signal);
        self
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

    pub fn signal(&self) -> Option<&Vector> {
        self.signal.as_ref()
    }

    /// Composite objective given a precomputed product `Ax`.
    pub fn value_from_product(&self, ax: &Vector, x: &Vector) -> f64 {
        0.5 * (ax - &self.b).norm_squared() + self.rho * x.lp_norm(1)
    }

    /// `‖Aᵀb‖_∞`; for `ρ` at or above this the minimiser is zero.
    pub fn zero_solution_threshold(&self) -> f64 {
        self.a.tr_mul(&self.b).amax()
    }
}

impl CompositeObjective for LassoProblem {
    fn dim(&self) -> usize {
        self.a.ncols()
    }

    fn smooth_value(&self, x: &Vector) -> f64 {
        0.5 * (&self.a * x - &self.b).norm_squared()
    }

    fn smooth_gradient(&self, x: &Vector) -> Vector {
        self.a.tr_mul(&(&self.a * x - &self.b))
    }

    fn nonsmooth_value(&self, x: &Vector) -> f64 {
        self.rho * x.lp_norm(1)
    }

    fn prox(&self, v: &Vector, t: f64) -> Vector {
        let level = self.rho * t;
        v.map(|x| shrink(x, level))
    }

    fn lipschitz(&self) -> f64 {
        self.lipschitz
    }
}

/// Number of applications of `A` and `Aᵀ` made during a run.
#[derive(Debug, Default, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct OperatorCounts {
    pub forward: usize,
    pub adjoint: usize,
}

/// Per-run access to a [`LassoProblem`]'s operator, counting every product.
pub struct LassoWorkspace<'a> {
    problem: &'a LassoProblem,
    counts: OperatorCounts,
}

impl<'a> LassoWorkspace<'a> {
    pub fn new(problem: &'a LassoProblem) -> Self {
        Self {
            problem,
            counts: OperatorCounts::default(),
        }
    }

    pub fn problem(&self) -> &'a LassoProblem {
        self.problem
    }

    /// `A x`.
    pub fn apply(&mut self, x: &Vector) -> Vector {
        self.counts.forward += 1;
        &self.problem.a * x
    }

    /// `Aᵀ r`.
    pub fn apply_adjoint(&mut self, r: &Vector) -> Vector {
        self.counts.adjoint += 1;
        self.problem.a.tr_mul(r)
    }

    pub fn counts(&self) -> OperatorCounts {
        self.counts
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small() -> LassoProblem {
        let a = Matrix::from_row_slice(2, 3, &[1.0, 0.0, 2.0, 0.0, 1.0, -1.0]);
        LassoProblem::new(a, Vector::from_vec(vec![1.0, 2.0]), 0.5).unwrap()
    }

    #[test]
    fn composite_value_nonnegative_and_split() {
        let p = small();
        let x = Vector::from_vec(vec![0.5, -1.0, 0.25]);
        let v = p.value(&x);
        assert!(v >= 0.0);
        let ax = p.a() * &x;
        assert_eq!(p.value_from_product(&ax, &x), v);
    }

    #[test]
    fn lipschitz_is_largest_gram_eigenvalue() {
        let p = small();
        // AAᵀ = [[5, -2], [-2, 2]] → eigenvalues 1 and 6.
        assert!((p.lipschitz() - 6.0).abs() < 1e-12);
    }

    #[test]
    fn workspace_counts_products() {
        let p = small();
        let mut ws = LassoWorkspace::new(&p);
        let ax = ws.apply(&Vector::zeros(3));
        let _ = ws.apply_adjoint(&ax);
        let _ = ws.apply_adjoint(&ax);
        assert_eq!(ws.counts(), OperatorCounts { forward: 1, adjoint: 2 });
    }

    #[test]
    fn rejects_bad_rho() {
        assert!(LassoProblem::new(Matrix::zeros(1, 1), Vector::zeros(1), 0.0).is_err());
    }
}
