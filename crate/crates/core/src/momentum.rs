//! Momentum sequences for the accelerated schemes.
//!
//! Scheme I carries `θ ∈ (0, 1]` updated by
//! `θₖ₊₁² = (1 − θₖ₊₁)θₖ² + qθₖ₊₁` and uses `βₖ₊₁ = θₖ(1 − θₖ)/(θₖ² + θₖ₊₁)`.
//! FISTA carries `θ ≥ 1` with `θₖ₊₁ = (1 + √(1 + 4θₖ²))/2` and `βₖ₊₁ = (θₖ − 1)/θₖ₊₁`.
//! A restart resets θ to 1, which makes the next β zero.

use crate::error::{Error, Result};

fn check_unit_theta(theta: f64) -> Result<()> {
    if !(theta > 0.0 && theta <= 1.0) {
        return Err(Error::input(format!("theta must lie in (0, 1], got {theta}")));
    }
    Ok(())
}

fn check_q(q: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&q) {
        return Err(Error::input(format!("q must lie in [0, 1], got {q}")));
    }
    Ok(())
}

/// Positive root of `θ² + (θₖ² − q)θ − θₖ² = 0`.
pub fn theta_next(theta_k: f64, q: f64) -> Result<f64> {
    check_unit_theta(theta_k)?;
    check_q(q)?;
    Ok(theta_next_unchecked(theta_k, q))
}

#[inline]
pub(crate) fn theta_next_unchecked(theta_k: f64, q: f64) -> f64 {
    let c = theta_k * theta_k;
    let b = c - q;
    let disc = (b * b + 4.0 * c).sqrt();
    if b > 0.0 {
        // −b + √(b² + 4c) cancels once θₖ² ≫ q; use the conjugate form.
        2.0 * c / (b + disc)
    } else {
        0.5 * (disc - b)
    }
}

/// `θₖ(1 − θₖ)/(θₖ² + θₖ₊₁)`.
pub fn beta_from_theta(theta_k: f64, theta_next: f64) -> Result<f64> {
    check_unit_theta(theta_k)?;
    check_unit_theta(theta_next)?;
    Ok(beta_from_theta_unchecked(theta_k, theta_next))
}

#[inline]
pub(crate) fn beta_from_theta_unchecked(theta_k: f64, theta_next: f64) -> f64 {
    theta_k * (1.0 - theta_k) / (theta_k * theta_k + theta_next)
}

/// Constant momentum `(1 − √(μ/L))/(1 + √(μ/L))` for a strongly convex function.
pub fn beta_star(mu: f64, l: f64) -> Result<f64> {
    if !(mu > 0.0 && mu <= l && l.is_finite()) {
        return Err(Error::input(format!("need 0 < mu <= L, got mu = {mu}, L = {l}")));
    }
    let s = (mu / l).sqrt();
    Ok((1.0 - s) / (1.0 + s))
}

/// `(1 + √(1 + 4θ²))/2`.
pub fn fista_theta_next(theta: f64) -> Result<f64> {
    if !(theta >= 1.0 && theta.is_finite()) {
        return Err(Error::input(format!("FISTA theta must be >= 1, got {theta}")));
    }
    Ok(fista_theta_next_unchecked(theta))
}

#[inline]
fn fista_theta_next_unchecked(theta: f64) -> f64 {
    0.5 * (1.0 + (1.0 + 4.0 * theta * theta).sqrt())
}

/// Scheme I momentum state: current θ, the parameter q and the last β produced.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MomentumState {
    theta: f64,
    q: f64,
    beta: f64,
}

impl MomentumState {
    pub fn new(q: f64) -> Result<Self> {
        check_q(q)?;
        Ok(Self {
            theta: 1.0,
            q,
            beta: 0.0,
        })
    }

    pub fn theta(&self) -> f64 {
        self.theta
    }

    pub fn q(&self) -> f64 {
        self.q
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    /// Advances θ and returns the new β.
    pub fn advance(&mut self) -> f64 {
        let next = theta_next_unchecked(self.theta, self.q);
        self.beta = beta_from_theta_unchecked(self.theta, next);
        self.theta = next;
        self.beta
    }

    pub fn reset(&mut self) {
        self.theta = 1.0;
        self.beta = 0.0;
    }
}

/// FISTA momentum state.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FistaMomentum {
    theta: f64,
}

impl Default for FistaMomentum {
    fn default() -> Self {
        Self { theta: 1.0 }
    }
}

impl FistaMomentum {
    pub fn theta(&self) -> f64 {
        self.theta
    }

    /// Advances θ and returns `(θₖ − 1)/θₖ₊₁`.
    pub fn advance(&mut self) -> f64 {
        let next = fista_theta_next_unchecked(self.theta);
        let beta = (self.theta - 1.0) / next;
        self.theta = next;
        beta
    }

    pub fn reset(&mut self) {
        self.theta = 1.0;
    }
}
