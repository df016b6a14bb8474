//! Per-eigenmode analysis of constant-momentum iterations on a quadratic.
//!
//! In the eigenbasis of `A` with step `1/L`, mode `i` with `r = λᵢ/L` follows
//! `wᵏ⁺² = (1 + β)(1 − r)wᵏ⁺¹ − β(1 − r)wᵏ` from `w¹ = (1 − r)w⁰`. The roots of
//! `x² − (1 + β)(1 − r)x + β(1 − r)` decide whether the mode decays
//! monotonically (over-damped), oscillates (under-damped) or sits on the
//! boundary `β = β*ᵢ = (1 − √r)/(1 + √r)` (critically damped).

use std::f64::consts::PI;
use std::fmt;
use std::io::Write;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::momentum::{beta_from_theta_unchecked, theta_next_unchecked};
use crate::oracles::Quadratic;
use crate::solvers::{constant_momentum, SolverConfig, Trace};
use crate::Vector;

/// Distance from `β*ᵢ` within which a mode counts as critically damped.
pub const CRITICAL_TOLERANCE: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Regime {
    OverDamped,
    CriticallyDamped,
    UnderDamped,
}

impl Regime {
    pub fn as_str(self) -> &'static str {
        match self {
            Regime::OverDamped => "over_damped",
            Regime::CriticallyDamped => "critically_damped",
            Regime::UnderDamped => "under_damped",
        }
    }
}

impl fmt::Display for Regime {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

fn check_inputs(beta: f64, lam_ratio: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&beta) {
        return Err(Error::input(format!("beta must lie in [0, 1], got {beta}")));
    }
    if !(lam_ratio > 0.0 && lam_ratio <= 1.0) {
        return Err(Error::input(format!(
            "eigenvalue ratio must lie in (0, 1], got {lam_ratio}"
        )));
    }
    Ok(())
}

/// `(1 − √r)/(1 + √r)`, the momentum that critically damps a mode with ratio `r`.
pub fn critical_beta(lam_ratio: f64) -> Result<f64> {
    check_inputs(0.0, lam_ratio)?;
    let s = lam_ratio.sqrt();
    Ok((1.0 - s) / (1.0 + s))
}

pub fn classify_regime(beta: f64, lam_ratio: f64) -> Result<Regime> {
    let beta_star = critical_beta(lam_ratio)?;
    check_inputs(beta, lam_ratio)?;
    Ok(if (beta - beta_star).abs() <= CRITICAL_TOLERANCE {
        Regime::CriticallyDamped
    } else if beta > beta_star {
        Regime::UnderDamped
    } else {
        Regime::OverDamped
    })
}

/// Both roots of the characteristic polynomial.
///
/// Real roots are returned larger first; complex roots with the positive
/// imaginary part first. Critically damped inputs return the repeated root.
pub fn char_roots(beta: f64, lam_ratio: f64) -> Result<(Complex64, Complex64)> {
    let regime = classify_regime(beta, lam_ratio)?;
    let s = 1.0 - lam_ratio;
    let a = (1.0 + beta) * s;
    let b = beta * s;
    if regime == Regime::CriticallyDamped {
        let r = Complex64::new(a / 2.0, 0.0);
        return Ok((r, r));
    }
    let disc = a * a - 4.0 * b;
    if disc >= 0.0 {
        let big = (a + disc.sqrt()) / 2.0;
        let small = if big > 0.0 { b / big } else { 0.0 };
        Ok((Complex64::new(big, 0.0), Complex64::new(small, 0.0)))
    } else {
        let im = (-disc).sqrt() / 2.0;
        Ok((Complex64::new(a / 2.0, im), Complex64::new(a / 2.0, -im)))
    }
}

/// Oscillation frequency `ψ = arccos((1 − r)(1 + β)/(2√(β(1 − r))))` of an
/// under-damped mode.
pub fn mode_frequency(beta: f64, lam_ratio: f64) -> Result<f64> {
    let regime = classify_regime(beta, lam_ratio)?;
    if regime != Regime::UnderDamped || lam_ratio >= 1.0 {
        return Err(Error::input(format!(
            "mode frequency needs complex roots; beta = {beta}, ratio = {lam_ratio} is {regime}"
        )));
    }
    let s = 1.0 - lam_ratio;
    let arg = s * (1.0 + beta) / (2.0 * (beta * s).sqrt());
    Ok(arg.min(1.0).acos())
}

/// Exact solution of the mode recurrence for given `w⁰`, with constants fitted
/// to `w⁰` and `w¹ = (1 − r)w⁰`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ModeSolution {
    /// `r = 1`: the mode vanishes after one step.
    Killed { w0: f64 },
    /// `c₁r₁ᵏ + c₂r₂ᵏ`
    Distinct { c1: f64, r1: f64, c2: f64, r2: f64 },
    /// `(c₁ + c₂k)rᵏ`
    Repeated { c1: f64, c2: f64, r: f64 },
    /// `c·ρᵏcos(kψ − δ)` with `ρ = √(β(1 − r))`.
    Oscillatory { c: f64, delta: f64, modulus: f64, psi: f64 },
}

impl ModeSolution {
    pub fn new(w0: f64, beta: f64, lam_ratio: f64) -> Result<Self> {
        let regime = classify_regime(beta, lam_ratio)?;
        let s = 1.0 - lam_ratio;
        let w1 = s * w0;
        if s == 0.0 {
            return Ok(ModeSolution::Killed { w0 });
        }
        if beta == 0.0 {
            return Ok(ModeSolution::Distinct {
                c1: w0,
                r1: s,
                c2: 0.0,
                r2: 0.0,
            });
        }
        let (r1, r2) = char_roots(beta, lam_ratio)?;
        Ok(match regime {
            Regime::CriticallyDamped => {
                let r = r1.re;
                ModeSolution::Repeated {
                    c1: w0,
                    c2: w1 / r - w0,
                    r,
                }
            }
            Regime::OverDamped => {
                let (r1, r2) = (r1.re, r2.re);
                let c2 = (w1 - r1 * w0) / (r2 - r1);
                ModeSolution::Distinct {
                    c1: w0 - c2,
                    r1,
                    c2,
                    r2,
                }
            }
            Regime::UnderDamped => {
                let modulus = (beta * s).sqrt();
                let psi = r1.arg();
                let cos_part = w0;
                let sin_part = (w1 / modulus - w0 * psi.cos()) / psi.sin();
                ModeSolution::Oscillatory {
                    c: cos_part.hypot(sin_part),
                    delta: sin_part.atan2(cos_part),
                    modulus,
                    psi,
                }
            }
        })
    }

    pub fn eval(&self, k: usize) -> f64 {
        let ki = k as i32;
        match *self {
            ModeSolution::Killed { w0 } => {
                if k == 0 {
                    w0
                } else {
                    0.0
                }
            }
            ModeSolution::Distinct { c1, r1, c2, r2 } => c1 * r1.powi(ki) + c2 * r2.powi(ki),
            ModeSolution::Repeated { c1, c2, r } => (c1 + c2 * k as f64) * r.powi(ki),
            ModeSolution::Oscillatory { c, delta, modulus, psi } => {
                c * modulus.powi(ki) * (k as f64 * psi - delta).cos()
            }
        }
    }

    /// Largest root modulus, which bounds the decay of the mode.
    pub fn decay_rate(&self) -> f64 {
        match *self {
            ModeSolution::Killed { .. } => 0.0,
            ModeSolution::Distinct { r1, r2, .. } => r1.abs().max(r2.abs()),
            ModeSolution::Repeated { r, .. } => r.abs(),
            ModeSolution::Oscillatory { modulus, .. } => modulus,
        }
    }
}

/// Closed-form value of mode `w` at iteration `k`.
pub fn closed_form_mode(w0: f64, beta: f64, lam_ratio: f64, k: usize) -> Result<f64> {
    Ok(ModeSolution::new(w0, beta, lam_ratio)?.eval(k))
}

/// Mode coordinates `(w, v)` of `x` and `y` under the constant-momentum iteration.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModeState {
    pub w: f64,
    pub v: f64,
    beta: f64,
    lam_ratio: f64,
}

impl ModeState {
    pub fn new(w0: f64, beta: f64, lam_ratio: f64) -> Result<Self> {
        check_inputs(beta, lam_ratio)?;
        Ok(Self {
            w: w0,
            v: w0,
            beta,
            lam_ratio,
        })
    }

    /// `wᵏ⁺¹ = (1 − r)vᵏ`, `vᵏ⁺¹ = wᵏ⁺¹ + β(wᵏ⁺¹ − wᵏ)`; returns `wᵏ⁺¹`.
    pub fn step(&mut self) -> f64 {
        let w_next = (1.0 - self.lam_ratio) * self.v;
        self.v = w_next + self.beta * (w_next - self.w);
        self.w = w_next;
        w_next
    }

    /// `w⁰, …, w^{k_max}` by direct iteration.
    pub fn history(mut self, k_max: usize) -> Vec<f64> {
        let mut out = Vec::with_capacity(k_max + 1);
        out.push(self.w);
        for _ in 0..k_max {
            out.push(self.step());
        }
        out
    }
}

/// Eigenvalue data of a quadratic with per-mode damping queries.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectralModel {
    eigenvalues: Vec<f64>,
}

impl SpectralModel {
    pub fn new(eigenvalues: Vec<f64>) -> Result<Self> {
        if eigenvalues.is_empty() {
            return Err(Error::input("spectral model needs at least one eigenvalue"));
        }
        if eigenvalues.iter().any(|&l| !(l > 0.0 && l.is_finite())) {
            return Err(Error::input("eigenvalues must be positive and finite"));
        }
        if eigenvalues.windows(2).any(|w| w[0] > w[1]) {
            return Err(Error::input("eigenvalues must be sorted ascending"));
        }
        Ok(Self { eigenvalues })
    }

    pub fn from_quadratic(quadratic: &Quadratic) -> Self {
        Self {
            eigenvalues: quadratic.eigenvalues().to_vec(),
        }
    }

    pub fn eigenvalues(&self) -> &[f64] {
        &self.eigenvalues
    }

    pub fn mu(&self) -> f64 {
        self.eigenvalues[0]
    }

    pub fn l(&self) -> f64 {
        self.eigenvalues[self.eigenvalues.len() - 1]
    }

    pub fn lam_ratio(&self, i: usize) -> f64 {
        self.eigenvalues[i] / self.l()
    }

    pub fn beta_star(&self, i: usize) -> f64 {
        let s = self.lam_ratio(i).sqrt();
        (1.0 - s) / (1.0 + s)
    }

    pub fn beta_stars(&self) -> Vec<f64> {
        (0..self.eigenvalues.len()).map(|i| self.beta_star(i)).collect()
    }

    pub fn regime(&self, i: usize, beta: f64) -> Result<Regime> {
        classify_regime(beta, self.lam_ratio(i))
    }

    pub fn psi(&self, i: usize, beta: f64) -> Result<f64> {
        mode_frequency(beta, self.lam_ratio(i))
    }
}

/// Constant-momentum iteration with step `1/L` on the full quadratic,
/// keeping every iterate.
pub fn simulate_constant_beta(quadratic: &Quadratic, beta: f64, x0: &Vector, k_max: usize) -> Result<Trace> {
    if !(0.0..1.0).contains(&beta) {
        return Err(Error::input(format!("beta must lie in [0, 1), got {beta}")));
    }
    let config = SolverConfig::for_lipschitz(quadratic.l())
        .with_max_iters(k_max)
        .recording_iterates();
    constant_momentum(quadratic, x0, beta, &config)
}

fn check_mu_l(mu: f64, l: f64) -> Result<()> {
    if !(mu > 0.0 && mu <= l && l.is_finite()) {
        return Err(Error::input(format!("need 0 < mu <= L, got mu = {mu}, L = {l}")));
    }
    Ok(())
}

/// Predicted spacing between adaptive restarts, `((π + 3)/2)√(L/μ)`.
pub fn predicted_adaptive_interval(mu: f64, l: f64) -> Result<f64> {
    check_mu_l(mu, l)?;
    Ok((PI + 3.0) / 2.0 * (l / mu).sqrt())
}

/// Predicted spacing between minima of the objective in the high-momentum
/// phase, `π√(L/μ)`.
pub fn predicted_period(mu: f64, l: f64) -> Result<f64> {
    check_mu_l(mu, l)?;
    Ok(PI * (l / mu).sqrt())
}

/// Iterations of the `q = 0` momentum sequence until `β` first exceeds
/// `β*(μ, L)`, found by iterating θ.
pub fn time_to_exceed_beta_star(mu: f64, l: f64) -> Result<usize> {
    check_mu_l(mu, l)?;
    let target = crate::momentum::beta_star(mu, l)?;
    let mut theta = 1.0;
    let mut k = 0;
    loop {
        k += 1;
        let next = theta_next_unchecked(theta, 0.0);
        if beta_from_theta_unchecked(theta, next) > target {
            return Ok(k);
        }
        theta = next;
    }
}

/// Iterations skipped before measuring oscillations, `⌈3√(L/μ)⌉`.
pub fn transient_length(mu: f64, l: f64) -> Result<usize> {
    check_mu_l(mu, l)?;
    Ok((3.0 * (l / mu).sqrt()).ceil() as usize)
}

fn smallest_mode(quadratic: &Quadratic, x0: &Vector) -> Result<(f64, f64, f64)> {
    crate::error::check_dim("starting point", quadratic.matrix().nrows(), x0.len())?;
    let w = quadratic.to_eigenbasis(x0);
    Ok((w[0], quadratic.mu(), quadratic.l()))
}

/// Single-mode approximation of `f(xᵏ) − f*` driven by the smallest eigenvalue:
/// `½μ(w_μ⁰)²βᵏ(1 − μ/L)ᵏcos²(k√(μ/L))`.
pub fn predicted_f_trace(quadratic: &Quadratic, x0: &Vector, beta: f64, k: usize) -> Result<f64> {
    let (w0, mu, l) = smallest_mode(quadratic, x0)?;
    check_inputs(beta, mu / l)?;
    let kf = k as f64;
    let envelope = (beta * (1.0 - mu / l)).powi(k as i32);
    Ok(0.5 * mu * w0 * w0 * envelope * (kf * (mu / l).sqrt()).cos().powi(2))
}

/// Single-mode approximation of the gradient restart quantity
/// `∇f(yᵏ)ᵀ(xᵏ⁺¹ − xᵏ)`, proportional to `−βᵏ(1 − μ/L)ᵏsin(2k√(μ/L))`.
///
/// Positive values predict a restart.
pub fn predicted_gradient_signal(quadratic: &Quadratic, x0: &Vector, beta: f64, k: usize) -> Result<f64> {
    let (w0, mu, l) = smallest_mode(quadratic, x0)?;
    check_inputs(beta, mu / l)?;
    let omega = (mu / l).sqrt();
    let envelope = (beta * (1.0 - mu / l)).powi(k as i32);
    Ok(-0.5 * mu * w0 * w0 * omega * envelope * (2.0 * k as f64 * omega).sin())
}

/// One row of a damping-regime sweep.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RegimeRow {
    pub beta: f64,
    pub lam_ratio: f64,
    pub regime: Regime,
    pub root1: Complex64,
    pub root2: Complex64,
    /// Oscillation frequency when the roots are complex.
    pub psi: Option<f64>,
}

pub fn regime_sweep(betas: &[f64], lam_ratios: &[f64]) -> Result<Vec<RegimeRow>> {
    let mut rows = Vec::with_capacity(betas.len() * lam_ratios.len());
    for &beta in betas {
        for &lam_ratio in lam_ratios {
            let regime = classify_regime(beta, lam_ratio)?;
            let (root1, root2) = char_roots(beta, lam_ratio)?;
            let psi = if root1.im != 0.0 {
                Some(mode_frequency(beta, lam_ratio)?)
            } else {
                None
            };
            rows.push(RegimeRow {
                beta,
                lam_ratio,
                regime,
                root1,
                root2,
                psi,
            });
        }
    }
    Ok(rows)
}

pub const REGIME_CSV_HEADER: &str = "beta,lam_ratio,regime,root1_re,root1_im,root2_re,root2_im,psi";

/// Writes a sweep as CSV; `psi` is left empty for real roots.
pub fn write_regime_csv<W: Write>(rows: &[RegimeRow], mut out: W) -> Result<()> {
    writeln!(out, "{REGIME_CSV_HEADER}")?;
    for row in rows {
        let psi = row.psi.map(|p| format!("{p:.16e}")).unwrap_or_default();
        writeln!(
            out,
            "{:.16e},{:.16e},{},{:.16e},{:.16e},{:.16e},{:.16e},{}",
            row.beta, row.lam_ratio, row.regime, row.root1.re, row.root1.im, row.root2.re, row.root2.im, psi
        )?;
    }
    Ok(())
}
