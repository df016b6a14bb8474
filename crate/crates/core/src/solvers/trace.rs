use serde::{Deserialize, Serialize};

use crate::oracles::OperatorCounts;
use crate::Vector;

/// One iteration of a solver run.
///
/// `f` is the objective at `xᵏ`, `beta` the momentum used to form `yᵏ`
/// (zero at k = 0 and whenever a restart fired at k), `step` the step size that
/// produced `xᵏ` (zero at k = 0).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TraceRecord {
    pub k: usize,
    pub f: f64,
    pub beta: f64,
    pub step: f64,
    pub restarted: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Trace {
    pub records: Vec<TraceRecord>,
    pub final_x: Vector,
    /// Reference optimum used for relative curves; attached after the run.
    pub f_star_ref: Option<f64>,
    /// Every iterate `x⁰, x¹, …` when the run was configured to keep them.
    pub iterates: Vec<Vector>,
    /// Operator applications, for solvers that count them.
    pub operator_counts: Option<OperatorCounts>,
    /// Whether the stopping tolerance was met before `max_iters`.
    pub converged: bool,
}

impl Trace {
    pub fn with_f_star(mut self, f_star: f64) -> Self {
        self.f_star_ref = Some(f_star);
        self
    }

    pub fn len(&self) -> usize {
        self.records.len()
    }

    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }

    /// Number of iterations performed.
    pub fn iterations(&self) -> usize {
        self.records.len().saturating_sub(1)
    }

    pub fn f_values(&self) -> Vec<f64> {
        self.records.iter().map(|r| r.f).collect()
    }

    pub fn final_f(&self) -> f64 {
        self.records.last().map_or(f64::NAN, |r| r.f)
    }

    /// Iteration indices at which a restart fired.
    pub fn restart_iterations(&self) -> Vec<usize> {
        self.records.iter().filter(|r| r.restarted).map(|r| r.k).collect()
    }

    /// Denominator of the relative suboptimality.
    ///
    /// `max(|f*|, 1e-300)`, except when `f* = 0` exactly (pure quadratics), where
    /// the initial gap `f(x⁰) − f*` is used instead.
    pub fn relative_scale(&self) -> Option<f64> {
        let f_star = self.f_star_ref?;
        if f_star == 0.0 {
            let f0 = self.records.first()?.f;
            Some((f0 - f_star).abs().max(1e-300))
        } else {
            Some(f_star.abs().max(1e-300))
        }
    }

    /// `(f − f*)/scale` per record; `None` without a reference optimum.
    pub fn relative_suboptimality(&self) -> Option<Vec<f64>> {
        let f_star = self.f_star_ref?;
        let scale = self.relative_scale()?;
        Some(self.records.iter().map(|r| (r.f - f_star) / scale).collect())
    }

    /// First iteration whose relative suboptimality is at most `tol`.
    pub fn iterations_to(&self, tol: f64) -> Option<usize> {
        let rel = self.relative_suboptimality()?;
        rel.iter().position(|&r| r <= tol).map(|i| self.records[i].k)
    }
}
