//! Seeded problem generators.
//!
//! Every generator draws from ChaCha8 (`rand_chacha::ChaCha8Rng::seed_from_u64`),
//! and Gaussian samples use `rand_distr::StandardNormal`. Both are portable and
//! platform independent, so a seed fully determines an instance.

use std::collections::BTreeMap;

use rand::seq::index;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal, StandardNormal};

use super::{BoxQp, LassoProblem, LogSumExp, Quadratic};
use crate::error::{Error, Result};
use crate::{Matrix, Vector};

/// Smallest eigenvalue of generated box-QP Hessians; the largest is this times `cond`.
///
/// With bounds `[-1, 1]` and a standard-normal `q`, this scale leaves a few
/// percent of the coordinates at a bound for condition numbers around `1e5..1e7`.
pub const BOXQP_SPECTRUM_FLOOR: f64 = 0.01;

pub fn seeded_rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn standard_normal_vector<R: Rng + ?Sized>(rng: &mut R, n: usize) -> Vector {
    Vector::from_iterator(n, (0..n).map(|_| StandardNormal.sample(rng)))
}

fn standard_normal_matrix_row_major<R: Rng + ?Sized>(rng: &mut R, rows: usize, cols: usize) -> Matrix {
    let values: Vec<f64> = (0..rows * cols).map(|_| StandardNormal.sample(rng)).collect();
    Matrix::from_row_slice(rows, cols, &values)
}

/// Haar-distributed orthogonal matrix: QR of a Gaussian matrix with the signs of
/// `diag(R)` folded into `Q`.
pub fn random_orthogonal<R: Rng + ?Sized>(rng: &mut R, n: usize) -> Matrix {
    let g = standard_normal_matrix_row_major(rng, n, n);
    let qr = g.qr();
    let r = qr.r();
    let mut q = qr.q();
    for j in 0..n {
        if r[(j, j)] < 0.0 {
            q.column_mut(j).neg_mut();
        }
    }
    q
}

/// `n` values geometrically spaced from `lo` to `hi`, both endpoints exact.
pub fn log_uniform_spectrum(n: usize, lo: f64, hi: f64) -> Vec<f64> {
    match n {
        0 => Vec::new(),
        1 => vec![lo],
        _ => {
            let ratio = (hi / lo).ln();
            let mut spectrum: Vec<f64> = (0..n).map(|i| lo * (ratio * i as f64 / (n - 1) as f64).exp()).collect();
            spectrum[0] = lo;
            spectrum[n - 1] = hi;
            spectrum
        }
    }
}

fn check_common(n: usize, cond: f64) -> Result<()> {
    if n < 2 {
        return Err(Error::input(format!("n must be >= 2, got {n}")));
    }
    if !(cond >= 1.0 && cond.is_finite()) {
        return Err(Error::input(format!("condition number must be >= 1, got {cond}")));
    }
    Ok(())
}

/// Pure quadratic `½xᵀAx` with spectrum log-uniform on `[1/cond, 1]` (so `L = 1`,
/// `μ = 1/cond`) in a random orthonormal basis. Minimiser `x* = 0`, `f* = 0`.
pub fn gen_quadratic(n: usize, cond: f64, seed: u64) -> Result<Quadratic> {
    check_common(n, cond)?;
    let mut rng = seeded_rng(seed);
    let basis = random_orthogonal(&mut rng, n);
    let spectrum = log_uniform_spectrum(n, 1.0 / cond, 1.0);
    Quadratic::from_spectrum(spectrum, basis, Vector::zeros(n))
}

/// Log-sum-exp with `aᵢ` (row-major) and then `b` drawn standard normal.
pub fn gen_logsumexp(n: usize, m: usize, rho: f64, seed: u64) -> Result<LogSumExp> {
    if n == 0 || m == 0 {
        return Err(Error::input("log-sum-exp needs n, m >= 1"));
    }
    if !(rho > 0.0) {
        return Err(Error::input(format!("rho must be positive, got {rho}")));
    }
    let mut rng = seeded_rng(seed);
    let a = standard_normal_matrix_row_major(&mut rng, m, n);
    let b = standard_normal_vector(&mut rng, m);
    LogSumExp::new(a, b, rho)
}

/// Lasso instance: `A` standard normal (row-major draw order), an `s`-sparse
/// signal `y` with uniformly chosen support and standard-normal nonzeros,
/// `b = Ay + w` with `w ~ N(0, σ²)`.
pub fn gen_lasso(n: usize, m: usize, s: usize, rho: f64, noise_sigma: f64, seed: u64) -> Result<LassoProblem> {
    if s > n {
        return Err(Error::input(format!("sparsity s = {s} exceeds n = {n}")));
    }
    if n == 0 || m == 0 {
        return Err(Error::input("lasso needs n, m >= 1"));
    }
    if !(noise_sigma >= 0.0 && noise_sigma.is_finite()) {
        return Err(Error::input(format!("noise sigma must be >= 0, got {noise_sigma}")));
    }
    let mut rng = seeded_rng(seed);
    let a = standard_normal_matrix_row_major(&mut rng, m, n);
    let mut support = index::sample(&mut rng, n, s).into_vec();
    support.sort_unstable();
    let mut signal = Vector::zeros(n);
    for &i in &support {
        signal[i] = StandardNormal.sample(&mut rng);
    }
    let noise_dist = Normal::new(0.0, noise_sigma).map_err(|e| Error::input(e.to_string()))?;
    let noise = Vector::from_iterator(m, (0..m).map(|_| noise_dist.sample(&mut rng)));
    let b = &a * &signal + noise;
    Ok(LassoProblem::new(a, b, rho)?.with_signal(signal))
}

/// Box QP on `[-1, 1]ⁿ` with `Q` log-uniform spectrum on
/// `[BOXQP_SPECTRUM_FLOOR, BOXQP_SPECTRUM_FLOOR·cond]` in a random basis and
/// `q` standard normal (drawn after the basis).
pub fn gen_boxqp(n: usize, cond: f64, seed: u64) -> Result<BoxQp> {
    check_common(n, cond)?;
    let mut rng = seeded_rng(seed);
    let basis = random_orthogonal(&mut rng, n);
    let spectrum = log_uniform_spectrum(n, BOXQP_SPECTRUM_FLOOR, BOXQP_SPECTRUM_FLOOR * cond);
    let hessian = Quadratic::from_spectrum(spectrum.clone(), basis, Vector::zeros(n))?;
    let q = standard_normal_vector(&mut rng, n);
    BoxQp::new(
        hessian.matrix().clone(),
        q,
        Vector::from_element(n, -1.0),
        Vector::from_element(n, 1.0),
        spectrum,
    )
}

pub(crate) fn params(pairs: &[(&str, f64)]) -> BTreeMap<String, f64> {
    pairs.iter().map(|(k, v)| (k.to_string(), *v)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracles::CompositeObjective;
    use nalgebra::SymmetricEigen;

    #[test]
    fn spectrum_endpoints_exact() {
        let s = log_uniform_spectrum(7, 1e-3, 1.0);
        assert_eq!(s[0], 1e-3);
        assert_eq!(s[6], 1.0);
        assert!(s.windows(2).all(|w| w[0] < w[1]));
        // Constant ratio between neighbours.
        let r0 = s[1] / s[0];
        assert!(s.windows(2).all(|w| (w[1] / w[0] - r0).abs() < 1e-12));
    }

    #[test]
    fn orthogonal_basis_is_orthonormal() {
        let mut rng = seeded_rng(3);
        let q = random_orthogonal(&mut rng, 30);
        let err = (q.tr_mul(&q) - Matrix::identity(30, 30)).amax();
        assert!(err < 1e-13, "{err}");
    }

    #[test]
    fn quadratic_reports_true_extreme_eigenvalues() {
        for &(n, cond) in &[(40usize, 1e2), (60, 1.0 / 4.1e-5)] {
            let f = gen_quadratic(n, cond, 11).unwrap();
            let eig = SymmetricEigen::new(f.matrix().clone()).eigenvalues;
            let (lo, hi) = (eig.min(), eig.max());
            assert!(((lo - f.mu()) / f.mu()).abs() < 1e-9, "{lo} vs {}", f.mu());
            assert!(((hi - f.l()) / f.l()).abs() < 1e-9);
            let a = f.matrix();
            assert_eq!(a, &a.transpose());
        }
    }

    #[test]
    fn quadratic_condition_matches_request() {
        let f = gen_quadratic(200, 1.0 / 4.1e-5, 1).unwrap();
        assert!((f.mu() / f.l() - 4.1e-5).abs() < 1e-15);
    }

    #[test]
    fn unit_condition_gives_identity() {
        let f = gen_quadratic(10, 1.0, 5).unwrap();
        assert_eq!(f.mu(), f.l());
        assert!((f.matrix() - Matrix::identity(10, 10)).amax() < 1e-14);
    }

    #[test]
    fn generators_are_deterministic() {
        assert_eq!(gen_quadratic(20, 50.0, 9).unwrap(), gen_quadratic(20, 50.0, 9).unwrap());
        assert_ne!(
            gen_quadratic(20, 50.0, 9).unwrap(),
            gen_quadratic(20, 50.0, 10).unwrap()
        );
        assert_eq!(
            gen_logsumexp(5, 12, 0.1, 2).unwrap(),
            gen_logsumexp(5, 12, 0.1, 2).unwrap()
        );
        assert_eq!(
            gen_lasso(30, 10, 4, 1.0, 0.1, 2).unwrap(),
            gen_lasso(30, 10, 4, 1.0, 0.1, 2).unwrap()
        );
        assert_eq!(gen_boxqp(20, 1e3, 4).unwrap(), gen_boxqp(20, 1e3, 4).unwrap());
    }

    #[test]
    fn precondition_errors() {
        assert!(gen_quadratic(1, 10.0, 0).is_err());
        assert!(gen_quadratic(5, 0.5, 0).is_err());
        assert!(gen_logsumexp(5, 10, 0.0, 0).is_err());
        assert!(matches!(gen_lasso(5, 10, 6, 1.0, 0.1, 0), Err(Error::Input(_))));
        assert!(gen_boxqp(1, 10.0, 0).is_err());
    }

    #[test]
    fn lasso_signal_has_exact_sparsity() {
        let p = gen_lasso(100, 20, 7, 1.0, 0.1, 8).unwrap();
        let y = p.signal().unwrap();
        assert_eq!(y.iter().filter(|&&v| v != 0.0).count(), 7);
    }

    #[test]
    fn lasso_without_signal_is_pure_noise() {
        let p = gen_lasso(50, 20, 0, 1.0, 0.1, 8).unwrap();
        assert!(p.signal().unwrap().iter().all(|&v| v == 0.0));
        // b = w, so A·0 − b = −w.
        let noise_norm = p.b().norm();
        assert!(noise_norm > 0.0 && noise_norm < 2.0);
    }

    #[test]
    fn boxqp_condition_number_exact() {
        let qp = gen_boxqp(50, 1e7, 3).unwrap();
        assert!(((qp.condition_number() - 1e7) / 1e7).abs() < 1e-9);
        assert!(qp.lower().iter().all(|&v| v == -1.0));
        assert!(qp.upper().iter().all(|&v| v == 1.0));
        assert!((qp.lipschitz() - BOXQP_SPECTRUM_FLOOR * 1e7).abs() < 1e-6);
    }
}
