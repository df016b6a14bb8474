//! Restart policies.
//!
//! A policy is consulted once per iteration, after the new iterate `xᵏ` is
//! formed. When it fires the solver rolls forward from `xᵏ` with `y = xᵏ`, `θ = 1`.

use std::fmt;
use std::str::FromStr;

use crate::error::{check_dim, Error, Result};
use crate::Vector;

/// Default suppression window after a restart (or the start of a run).
pub const DEFAULT_MIN_INTERVAL: usize = 5;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RestartKind {
    None,
    /// Restart every `interval` iterations.
    Fixed(usize),
    /// Restart when the objective increases.
    Function,
    /// Restart when the (generalized) gradient at `yᵏ⁻¹` makes an acute angle
    /// with the step `xᵏ − xᵏ⁻¹`.
    Gradient,
}

/// Quantities a policy may inspect at iteration k.
#[derive(Debug, Clone, Copy)]
pub struct RestartProbe {
    pub f_curr: f64,
    pub f_prev: f64,
    /// `∇f(yᵏ⁻¹)ᵀ(xᵏ − xᵏ⁻¹)`, or `(yᵏ⁻¹ − xᵏ)ᵀ(xᵏ − xᵏ⁻¹)` for composite problems.
    /// Only consulted by [`RestartKind::Gradient`].
    pub gradient_inner: f64,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RestartPolicy {
    kind: RestartKind,
    min_interval: usize,
    steps_since_restart: usize,
    total_restarts: usize,
}

impl RestartPolicy {
    fn with_kind(kind: RestartKind) -> Self {
        Self {
            kind,
            min_interval: DEFAULT_MIN_INTERVAL,
            steps_since_restart: 0,
            total_restarts: 0,
        }
    }

    pub fn none() -> Self {
        Self::with_kind(RestartKind::None)
    }

    pub fn fixed(interval: usize) -> Result<Self> {
        if interval == 0 {
            return Err(Error::input("fixed restart interval must be >= 1"));
        }
        // The interval itself is the suppression window.
        Ok(Self {
            min_interval: DEFAULT_MIN_INTERVAL.min(interval),
            ..Self::with_kind(RestartKind::Fixed(interval))
        })
    }

    pub fn function() -> Self {
        Self::with_kind(RestartKind::Function)
    }

    pub fn gradient() -> Self {
        Self::with_kind(RestartKind::Gradient)
    }

    /// Sets the suppression window; `1` reproduces the raw restart rules.
    pub fn with_min_interval(mut self, min_interval: usize) -> Result<Self> {
        if min_interval == 0 {
            return Err(Error::input("min_interval must be >= 1"));
        }
        if let RestartKind::Fixed(k) = self.kind {
            self.min_interval = min_interval.min(k);
        } else {
            self.min_interval = min_interval;
        }
        Ok(self)
    }

    pub fn kind(&self) -> RestartKind {
        self.kind
    }

    pub fn min_interval(&self) -> usize {
        self.min_interval
    }

    pub fn steps_since_restart(&self) -> usize {
        self.steps_since_restart
    }

    pub fn total_restarts(&self) -> usize {
        self.total_restarts
    }

    pub fn is_gradient_based(&self) -> bool {
        self.kind == RestartKind::Gradient
    }

    /// A copy with cleared counters, for a fresh run.
    pub fn fresh(&self) -> Self {
        Self {
            steps_since_restart: 0,
            total_restarts: 0,
            ..self.clone()
        }
    }

    /// Records one iteration and decides whether to restart.
    pub fn step(&mut self, probe: &RestartProbe) -> bool {
        self.steps_since_restart += 1;
        let fire = match self.kind {
            RestartKind::None => false,
            RestartKind::Fixed(k) => self.steps_since_restart == k,
            RestartKind::Function => self.steps_since_restart >= self.min_interval && probe.f_curr > probe.f_prev,
            RestartKind::Gradient => self.steps_since_restart >= self.min_interval && probe.gradient_inner > 0.0,
        };
        if fire {
            self.steps_since_restart = 0;
            self.total_restarts += 1;
        }
        fire
    }
}

impl fmt::Display for RestartPolicy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.kind {
            RestartKind::None => write!(f, "none"),
            RestartKind::Fixed(k) => write!(f, "fixed:{k}"),
            RestartKind::Function => write!(f, "func"),
            RestartKind::Gradient => write!(f, "grad"),
        }
    }
}

impl FromStr for RestartPolicy {
    type Err = Error;

    /// Parses `none`, `fixed:<k>`, `func` or `grad`.
    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "none" => Ok(Self::none()),
            "func" => Ok(Self::function()),
            "grad" => Ok(Self::gradient()),
            other => {
                let k = other
                    .strip_prefix("fixed:")
                    .ok_or_else(|| Error::input(format!("unknown restart policy `{other}`")))?;
                let k: usize = k
                    .parse()
                    .map_err(|_| Error::input(format!("bad fixed restart interval `{k}`")))?;
                Self::fixed(k)
            }
        }
    }
}

impl serde::Serialize for RestartPolicy {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> serde::Deserialize<'de> for RestartPolicy {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let s = <String as serde::Deserialize>::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// Upper bound on the optimal fixed restart interval, `e·√(8L/μ)`.
pub fn fixed_interval_bound(mu: f64, l: f64) -> Result<f64> {
    if !(mu > 0.0 && mu <= l && l.is_finite()) {
        return Err(Error::input(format!("need 0 < mu <= L, got mu = {mu}, L = {l}")));
    }
    Ok(std::f64::consts::E * (8.0 * l / mu).sqrt())
}

/// [`fixed_interval_bound`] rounded to the nearest integer, at least 1.
pub fn fixed_interval(mu: f64, l: f64) -> Result<usize> {
    Ok((fixed_interval_bound(mu, l)?.round() as usize).max(1))
}

/// Function scheme: restart iff `f(xᵏ) > f(xᵏ⁻¹)`.
pub fn should_restart_function(f_curr: f64, f_prev: f64) -> Result<bool> {
    if f_curr.is_nan() || f_prev.is_nan() {
        return Err(Error::input("objective values must not be NaN"));
    }
    Ok(f_curr > f_prev)
}

/// Gradient scheme: restart iff `∇f(yᵏ⁻¹)ᵀ(xᵏ − xᵏ⁻¹) > 0`.
pub fn should_restart_gradient(grad_y_prev: &Vector, x_curr: &Vector, x_prev: &Vector) -> Result<bool> {
    check_dim("gradient restart", grad_y_prev.len(), x_curr.len())?;
    check_dim("gradient restart", grad_y_prev.len(), x_prev.len())?;
    Ok(gradient_inner(grad_y_prev, x_curr, x_prev) > 0.0)
}

/// Generalized-gradient scheme: restart iff `(yᵏ⁻¹ − xᵏ)ᵀ(xᵏ − xᵏ⁻¹) > 0`.
pub fn should_restart_generalized(y_prev: &Vector, x_curr: &Vector, x_prev: &Vector) -> Result<bool> {
    check_dim("generalized restart", y_prev.len(), x_curr.len())?;
    check_dim("generalized restart", y_prev.len(), x_prev.len())?;
    Ok(generalized_inner(y_prev, x_curr, x_prev) > 0.0)
}

pub(crate) fn gradient_inner(grad: &Vector, x_curr: &Vector, x_prev: &Vector) -> f64 {
    grad.iter()
        .zip(x_curr.iter().zip(x_prev.iter()))
        .map(|(g, (c, p))| g * (c - p))
        .sum()
}

pub(crate) fn generalized_inner(y_prev: &Vector, x_curr: &Vector, x_prev: &Vector) -> f64 {
    y_prev
        .iter()
        .zip(x_curr.iter().zip(x_prev.iter()))
        .map(|(y, (c, p))| (y - c) * (c - p))
        .sum()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(xs: &[f64]) -> Vector {
        Vector::from_column_slice(xs)
    }

    fn probe(f_curr: f64, f_prev: f64, gradient_inner: f64) -> RestartProbe {
        RestartProbe {
            f_curr,
            f_prev,
            gradient_inner,
        }
    }

    #[test]
    fn fixed_bound_examples() {
        let e8 = std::f64::consts::E * 8f64.sqrt();
        assert!((fixed_interval_bound(3.0, 3.0).unwrap() - e8).abs() < 1e-12);
        assert!((e8 - 7.69).abs() < 0.01);
        let a = fixed_interval_bound(1e-3, 1.0).unwrap();
        let b = fixed_interval_bound(5e-3, 5.0).unwrap();
        assert!((a - b).abs() < 1e-9 * a);
        assert!(fixed_interval_bound(0.0, 1.0).is_err());
        assert!(fixed_interval_bound(2.0, 1.0).is_err());
    }

    #[test]
    fn fixed_bound_for_restart_comparison_instance() {
        // L/μ ≈ 8289 is the conditioning at which the bound is 700 iterations.
        let cond = (700.0 / std::f64::consts::E).powi(2) / 8.0;
        assert_eq!(fixed_interval(1.0 / cond, 1.0).unwrap(), 700);
    }

    #[test]
    fn function_test_is_strict() {
        assert!(!should_restart_function(1.0, 2.0).unwrap());
        assert!(should_restart_function(2.0, 1.0).unwrap());
        assert!(!should_restart_function(1.0, 1.0).unwrap());
        assert!(should_restart_function(f64::NAN, 1.0).is_err());
    }

    #[test]
    fn gradient_test_examples() {
        let g = v(&[1.0, 0.0]);
        let zero = v(&[0.0, 0.0]);
        assert!(!should_restart_gradient(&g, &v(&[-1.0, 0.0]), &zero).unwrap());
        assert!(should_restart_gradient(&g, &v(&[1.0, 0.0]), &zero).unwrap());
        assert!(!should_restart_gradient(&g, &v(&[0.0, 1.0]), &zero).unwrap());
        assert!(should_restart_gradient(&g, &v(&[1.0]), &zero).is_err());
    }

    #[test]
    fn generalized_test_degenerate_cases() {
        let x = v(&[1.0, 2.0]);
        let x_prev = v(&[0.0, 0.5]);
        assert!(!should_restart_generalized(&x, &x, &x_prev).unwrap());
        assert!(!should_restart_generalized(&v(&[3.0, 3.0]), &x, &x).unwrap());
        assert!(should_restart_generalized(&x, &x, &v(&[0.0])).is_err());
    }

    #[test]
    fn none_never_fires() {
        let mut p = RestartPolicy::none();
        for _ in 0..100 {
            assert!(!p.step(&probe(2.0, 1.0, 1.0)));
        }
        assert_eq!(p.total_restarts(), 0);
    }

    #[test]
    fn fixed_fires_on_schedule() {
        let mut p = RestartPolicy::fixed(7).unwrap();
        let fired: Vec<usize> = (1..=30).filter(|_| p.step(&probe(0.0, 1.0, -1.0))).collect();
        assert_eq!(fired, vec![7, 14, 21, 28]);
        let mut p = RestartPolicy::fixed(2).unwrap();
        let fired: Vec<usize> = (1..=6).filter(|_| p.step(&probe(0.0, 1.0, -1.0))).collect();
        assert_eq!(fired, vec![2, 4, 6]);
    }

    #[test]
    fn adaptive_suppressed_within_window() {
        for mut p in [RestartPolicy::function(), RestartPolicy::gradient()] {
            let mut fired = Vec::new();
            for k in 1..=20 {
                if p.step(&probe(2.0, 1.0, 1.0)) {
                    fired.push(k);
                }
            }
            assert_eq!(fired, vec![5, 10, 15, 20]);
        }
        let mut raw = RestartPolicy::function().with_min_interval(1).unwrap();
        assert!(raw.step(&probe(2.0, 1.0, 0.0)));
        assert!(raw.step(&probe(2.0, 1.0, 0.0)));
    }

    #[test]
    fn parse_and_display_roundtrip() {
        for s in ["none", "fixed:700", "func", "grad"] {
            assert_eq!(s.parse::<RestartPolicy>().unwrap().to_string(), s);
        }
        for bad in ["fixed:0", "fixed:x", "speed", ""] {
            assert!(matches!(bad.parse::<RestartPolicy>(), Err(Error::Input(_))));
        }
    }
}
