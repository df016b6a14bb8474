use super::SmoothObjective;
use crate::error::{check_dim, Error, Result};
use crate::{Matrix, Vector};

/// `f(x) = ½ xᵀAx + qᵀx` with `A` symmetric positive definite.
///
/// The eigendecomposition `A = V diag(λ) Vᵀ` is kept alongside `A`, so callers
/// never need a numerical eigensolver. Eigenvalues are sorted ascending and the
/// columns of `V` follow the same order.
#[derive(Debug, Clone, PartialEq)]
pub struct Quadratic {
    matrix: Matrix,
    linear: Vector,
    eigenvalues: Vec<f64>,
    eigenvectors: Matrix,
}

impl Quadratic {
    /// Builds `A = V diag(λ) Vᵀ` from an ascending spectrum and an orthonormal basis.
    pub fn from_spectrum(eigenvalues: Vec<f64>, basis: Matrix, linear: Vector) -> Result<Self> {
        let n = eigenvalues.len();
        if n == 0 {
            return Err(Error::input("quadratic needs at least one dimension"));
        }
        if basis.nrows() != n || basis.ncols() != n {
            return Err(Error::input(format!(
                "basis must be {n}x{n}, got {}x{}",
                basis.nrows(),
                basis.ncols()
            )));
        }
        check_dim("quadratic linear term", n, linear.len())?;
        if eigenvalues.iter().any(|&l| !(l > 0.0 && l.is_finite())) {
            return Err(Error::input("eigenvalues must be positive and finite"));
        }
        if eigenvalues.windows(2).any(|w| w[0] > w[1]) {
            return Err(Error::input("eigenvalues must be sorted ascending"));
        }
        let gram = basis.transpose() * &basis;
        let orth_err = (gram - Matrix::identity(n, n)).amax();
        if orth_err > 1e-10 {
            return Err(Error::input(format!(
                "basis is not orthonormal (max deviation {orth_err:e})"
            )));
        }

        let mut scaled = basis.clone();
        for (j, &l) in eigenvalues.iter().enumerate() {
            scaled.column_mut(j).scale_mut(l);
        }
        let a = scaled * basis.transpose();
        let matrix = (&a + a.transpose()) * 0.5;

        Ok(Self {
            matrix,
            linear,
            eigenvalues,
            eigenvectors: basis,
        })
    }

    /// A diagonal quadratic `½ Σ dᵢ xᵢ²`, entries given in any order.
    pub fn diagonal(diag: &[f64]) -> Result<Self> {
        let n = diag.len();
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by(|&i, &j| diag[i].total_cmp(&diag[j]));
        let eigenvalues = order.iter().map(|&i| diag[i]).collect();
        let mut basis = Matrix::zeros(n, n);
        for (col, &i) in order.iter().enumerate() {
            basis[(i, col)] = 1.0;
        }
        Self::from_spectrum(eigenvalues, basis, Vector::zeros(n))
    }

    /// Returns the same quadratic with linear term `q`.
    pub fn with_linear(mut self, linear: Vector) -> Result<Self> {
        check_dim("quadratic linear term", self.dim(), linear.len())?;
        self.linear = linear;
        Ok(self)
    }

    pub(crate) fn from_parts_unchecked(
        matrix: Matrix,
        linear: Vector,
        eigenvalues: Vec<f64>,
        eigenvectors: Matrix,
    ) -> Self {
        Self {
            matrix,
            linear,
            eigenvalues,
            eigenvectors,
        }
    }

    pub fn matrix(&self) -> &Matrix {
        &self.matrix
    }

    pub fn linear(&self) -> &Vector {
        &self.linear
    }

    pub fn eigenvalues(&self) -> &[f64] {
        &self.eigenvalues
    }

    pub fn eigenvectors(&self) -> &Matrix {
        &self.eigenvectors
    }

    /// Strong convexity parameter, `λ_min`.
    pub fn mu(&self) -> f64 {
        self.eigenvalues[0]
    }

    /// Gradient Lipschitz constant, `λ_max`.
    pub fn l(&self) -> f64 {
        *self.eigenvalues.last().expect("nonempty spectrum")
    }

    pub fn condition_number(&self) -> f64 {
        self.l() / self.mu()
    }

    /// `x* = -A⁻¹q`, evaluated through the stored eigendecomposition.
    pub fn minimizer(&self) -> Vector {
        let mut coeffs = self.eigenvectors.tr_mul(&self.linear);
        for (c, &l) in coeffs.iter_mut().zip(&self.eigenvalues) {
            *c = -*c / l;
        }
        &self.eigenvectors * coeffs
    }

    /// `f* = -½ qᵀA⁻¹q`; exactly zero when there is no linear term.
    pub fn optimal_value(&self) -> f64 {
        if self.linear.iter().all(|&v| v == 0.0) {
            return 0.0;
        }
        let coeffs = self.eigenvectors.tr_mul(&self.linear);
        -0.5 * coeffs
            .iter()
            .zip(&self.eigenvalues)
            .map(|(c, l)| c * c / l)
            .sum::<f64>()
    }

    /// Mode coordinates `w = Vᵀ(x − x*)`.
    pub fn to_eigenbasis(&self, x: &Vector) -> Vector {
        if self.linear.iter().all(|&v| v == 0.0) {
            self.eigenvectors.tr_mul(x)
        } else {
            self.eigenvectors.tr_mul(&(x - self.minimizer()))
        }
    }
}

impl SmoothObjective for Quadratic {
    fn dim(&self) -> usize {
        self.eigenvalues.len()
    }

    fn value(&self, x: &Vector) -> f64 {
        let ax = &self.matrix * x;
        0.5 * x.dot(&ax) + self.linear.dot(x)
    }

    fn gradient(&self, x: &Vector) -> Vector {
        &self.matrix * x + &self.linear
    }

    fn lipschitz(&self) -> Option<f64> {
        Some(self.l())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracles::{eval_grad, eval_value};

    #[test]
    fn identity_minimum_is_zero() {
        let f = Quadratic::diagonal(&[1.0, 1.0]).unwrap();
        assert_eq!(eval_value(&f, &Vector::zeros(2)).unwrap(), 0.0);
    }

    #[test]
    fn diagonal_value_and_gradient() {
        let f = Quadratic::diagonal(&[1.0, 4.0]).unwrap();
        let x = Vector::from_vec(vec![1.0, 1.0]);
        assert_eq!(eval_value(&f, &x).unwrap(), 2.5);
        assert_eq!(eval_grad(&f, &x).unwrap(), Vector::from_vec(vec![1.0, 4.0]));
        assert_eq!(f.mu(), 1.0);
        assert_eq!(f.l(), 4.0);
    }

    #[test]
    fn dimension_mismatch_is_input_error() {
        let f = Quadratic::diagonal(&[1.0, 4.0]).unwrap();
        let x = Vector::zeros(3);
        assert!(matches!(eval_value(&f, &x), Err(Error::Input(_))));
        assert!(matches!(eval_grad(&f, &x), Err(Error::Input(_))));
    }

    #[test]
    fn rejects_nonpositive_spectrum() {
        assert!(Quadratic::diagonal(&[0.0, 1.0]).is_err());
        assert!(Quadratic::diagonal(&[-1.0, 1.0]).is_err());
    }

    #[test]
    fn minimizer_zeroes_gradient() {
        let f = Quadratic::diagonal(&[2.0, 5.0])
            .unwrap()
            .with_linear(Vector::from_vec(vec![1.0, -3.0]))
            .unwrap();
        let xs = f.minimizer();
        assert!(f.gradient(&xs).norm() < 1e-14);
        assert!((f.value(&xs) - f.optimal_value()).abs() < 1e-14);
    }
}
