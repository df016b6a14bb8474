//! Seeded experiment lineups, trace measurements and export.
//!
//! Each experiment generates its instance(s) from the seed, runs a fixed lineup
//! of solver configurations and summarizes every run against a reference
//! optimum. Quadratics use the analytic optimum; the other problems use the
//! smallest objective value seen across the lineup and one restarted run with
//! ten times the iteration budget.

mod export;
mod measure;

pub use export::{
    export_traces, export_trajectories, read_traces_csv, read_traces_json, write_traces_csv, write_traces_json,
    write_trajectories_csv, ExportFormat, ExportedRecord, ExportedRun, TRACE_CSV_HEADER, TRAJECTORY_CSV_HEADER,
};
pub use measure::{mean_interval, measure_oscillation_period, measure_restart_intervals, oscillation_period};

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::dynamics::{predicted_adaptive_interval, predicted_period, transient_length};
use crate::error::{Error, Result};
use crate::oracles::{
    gen_boxqp, gen_lasso, gen_logsumexp, gen_quadratic, seeded_rng, standard_normal_vector, BoxQp, LassoProblem,
    LogSumExp, Quadratic,
};
use crate::restart::{fixed_interval, RestartPolicy};
use crate::solvers::{
    accel_projected_gradient, accelerated_scheme1, fista, gradient_descent, ista, projected_gradient, SolverConfig,
    StepSize, Trace,
};
use crate::Vector;

/// Relative suboptimality levels reported in every summary.
pub const SUMMARY_TOLERANCES: [f64; 3] = [1e-4, 1e-8, 1e-12];

/// Stream offset separating starting points from instance data.
const START_POINT_STREAM: u64 = 0x5851_F42D_4C95_7F2D;

/// Budget multiplier for the reference-optimum run.
const REFERENCE_BUDGET_FACTOR: usize = 10;

pub mod defaults {
    pub const Q_SENSITIVITY_N: usize = 200;
    pub const Q_SENSITIVITY_COND: f64 = 1.0 / 4.1e-5;
    pub const Q_SENSITIVITY_ITERS: usize = 2500;

    pub const TRAJECTORY_COND: f64 = 100.0;
    pub const TRAJECTORY_ITERS: usize = 200;

    pub const RESTART_N: usize = 500;
    /// Condition number whose fixed-restart bound `e√(8L/μ)` is 700.
    pub const RESTART_COND: f64 = 700.0 * 700.0 / (8.0 * std::f64::consts::E * std::f64::consts::E);
    pub const RESTART_ITERS: usize = 3000;

    pub const LOGSUMEXP_N: usize = 20;
    pub const LOGSUMEXP_M: usize = 100;
    pub const LOGSUMEXP_RHOS: [f64; 4] = [0.05, 0.1, 0.5, 1.0];
    pub const LOGSUMEXP_INITIAL_STEP: f64 = 1.0;
    pub const LOGSUMEXP_ITERS: usize = 1000;

    pub const LASSO_N: usize = 2000;
    pub const LASSO_SIZES: [(usize, usize); 2] = [(100, 20), (500, 100)];
    pub const LASSO_RHO: f64 = 1.0;
    pub const LASSO_NOISE: f64 = 0.1;
    pub const LASSO_ITERS: usize = 2000;

    pub const BOXQP_N: usize = 500;
    pub const BOXQP_COND: f64 = 1e7;
    pub const BOXQP_ITERS: usize = 3000;
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum ExperimentKind {
    #[serde(rename = "q_sensitivity")]
    QSensitivity,
    #[serde(rename = "trajectory_2d")]
    Trajectory2d,
    #[serde(rename = "restart_comparison")]
    RestartComparison,
    #[serde(rename = "logsumexp")]
    LogSumExp,
    #[serde(rename = "lasso")]
    Lasso,
    #[serde(rename = "boxqp")]
    BoxQp,
}

impl ExperimentKind {
    pub const ALL: [ExperimentKind; 6] = [
        ExperimentKind::QSensitivity,
        ExperimentKind::Trajectory2d,
        ExperimentKind::RestartComparison,
        ExperimentKind::LogSumExp,
        ExperimentKind::Lasso,
        ExperimentKind::BoxQp,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            ExperimentKind::QSensitivity => "q_sensitivity",
            ExperimentKind::Trajectory2d => "trajectory_2d",
            ExperimentKind::RestartComparison => "restart_comparison",
            ExperimentKind::LogSumExp => "logsumexp",
            ExperimentKind::Lasso => "lasso",
            ExperimentKind::BoxQp => "boxqp",
        }
    }

    /// Instance parameters this experiment reads.
    pub fn parameters(self) -> &'static [&'static str] {
        match self {
            ExperimentKind::QSensitivity | ExperimentKind::RestartComparison | ExperimentKind::BoxQp => {
                &["n", "cond", "max_iters"]
            }
            ExperimentKind::Trajectory2d => &["cond", "max_iters"],
            ExperimentKind::LogSumExp => &["n", "m", "rho", "max_iters"],
            ExperimentKind::Lasso => &["n", "m", "s", "rho", "max_iters"],
        }
    }
}

impl fmt::Display for ExperimentKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for ExperimentKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Self::ALL
            .into_iter()
            .find(|k| k.as_str() == s)
            .ok_or_else(|| Error::input(format!("unknown experiment `{s}`")))
    }
}

/// Experiment selection plus optional overrides of the default sizes.
///
/// With `restart` set the lineup collapses to a single run of the experiment's
/// accelerated method under that policy.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentConfig {
    pub experiment: ExperimentKind,
    #[serde(default)]
    pub seed: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub m: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub s: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rho: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cond: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub max_iters: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub restart: Option<RestartPolicy>,
}

fn as_count(name: &str, value: f64) -> Result<usize> {
    if value >= 0.0 && value.fract() == 0.0 && value <= usize::MAX as f64 {
        Ok(value as usize)
    } else {
        Err(Error::input(format!(
            "parameter {name} must be a non-negative integer, got {value}"
        )))
    }
}

impl ExperimentConfig {
    pub fn new(experiment: ExperimentKind, seed: u64) -> Self {
        Self {
            experiment,
            seed,
            n: None,
            m: None,
            s: None,
            rho: None,
            cond: None,
            max_iters: None,
            restart: None,
        }
    }

    /// Sets a parameter by name (`seed`, `n`, `m`, `s`, `rho`, `cond`, `max_iters`).
    pub fn set_param(&mut self, name: &str, value: f64) -> Result<()> {
        match name {
            "seed" => self.seed = as_count(name, value)? as u64,
            "n" => self.n = Some(as_count(name, value)?),
            "m" => self.m = Some(as_count(name, value)?),
            "s" => self.s = Some(as_count(name, value)?),
            "max_iters" => self.max_iters = Some(as_count(name, value)?),
            "rho" => self.rho = Some(value),
            "cond" => self.cond = Some(value),
            other => return Err(Error::input(format!("unknown parameter `{other}`"))),
        }
        Ok(())
    }

    pub fn validate(&self) -> Result<()> {
        let set = [
            ("n", self.n.is_some()),
            ("m", self.m.is_some()),
            ("s", self.s.is_some()),
            ("rho", self.rho.is_some()),
            ("cond", self.cond.is_some()),
            ("max_iters", self.max_iters.is_some()),
        ];
        let allowed = self.experiment.parameters();
        for (name, present) in set {
            if present && !allowed.contains(&name) {
                return Err(Error::input(format!(
                    "parameter {name} does not apply to {} (accepted: {})",
                    self.experiment,
                    allowed.join(", ")
                )));
            }
        }
        if self.max_iters == Some(0) {
            return Err(Error::input("max_iters must be >= 1"));
        }
        Ok(())
    }
}

/// One solver run of an experiment.
#[derive(Debug, Clone, PartialEq)]
pub struct Run {
    pub run_id: String,
    pub trace: Trace,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ToleranceHit {
    pub tol: f64,
    /// First iteration at or below `tol`; `None` if never reached.
    pub iterations: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunSummary {
    pub run_id: String,
    pub iterations: usize,
    pub final_f: f64,
    pub f_star: f64,
    pub f_star_source: String,
    pub final_f_rel: f64,
    pub iterations_to_tolerance: Vec<ToleranceHit>,
    pub restart_count: usize,
    pub restart_intervals: Vec<usize>,
    pub mean_restart_interval: Option<f64>,
    /// Mean spacing of objective minima after the low-momentum transient;
    /// measured only for unrestarted runs on quadratics.
    pub oscillation_period: Option<f64>,
    pub predicted_restart_interval: Option<f64>,
    pub predicted_period: Option<f64>,
}

impl RunSummary {
    pub fn iterations_to(&self, tol: f64) -> Option<usize> {
        self.iterations_to_tolerance
            .iter()
            .find(|h| h.tol == tol)
            .and_then(|h| h.iterations)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Summary {
    pub experiment: String,
    pub seed: u64,
    pub runs: Vec<RunSummary>,
}

impl Summary {
    pub fn run(&self, run_id: &str) -> Option<&RunSummary> {
        self.runs.iter().find(|r| r.run_id == run_id)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentOutput {
    pub summary: Summary,
    pub runs: Vec<Run>,
}

impl ExperimentOutput {
    pub fn run(&self, run_id: &str) -> Option<&Run> {
        self.runs.iter().find(|r| r.run_id == run_id)
    }
}

/// Seeded standard-normal starting point, independent of the instance stream.
pub fn start_point(seed: u64, n: usize) -> Vector {
    standard_normal_vector(&mut seeded_rng(seed ^ START_POINT_STREAM), n)
}

struct Group {
    runs: Vec<Run>,
    f_star_source: String,
    /// `(μ, L)` when the instance is a quadratic with known spectrum.
    spectrum: Option<(f64, f64)>,
}

fn prefixed(prefix: &Option<String>, name: &str) -> String {
    match prefix {
        Some(p) => format!("{p}/{name}"),
        None => name.to_string(),
    }
}

fn summarize(run: &Run, source: &str, spectrum: Option<(f64, f64)>) -> Result<RunSummary> {
    let trace = &run.trace;
    let intervals = measure_restart_intervals(trace);
    let rel = trace.relative_suboptimality().unwrap_or_default();
    let (predicted_restart_interval, predicted_period, oscillation) = match spectrum {
        Some((mu, l)) => {
            let oscillation = if trace.restart_iterations().is_empty() {
                measure_oscillation_period(trace, transient_length(mu, l)?)
            } else {
                None
            };
            (
                Some(predicted_adaptive_interval(mu, l)?),
                Some(predicted_period(mu, l)?),
                oscillation,
            )
        }
        None => (None, None, None),
    };
    Ok(RunSummary {
        run_id: run.run_id.clone(),
        iterations: trace.iterations(),
        final_f: trace.final_f(),
        f_star: trace.f_star_ref.unwrap_or(f64::NAN),
        f_star_source: source.to_string(),
        final_f_rel: rel.last().copied().unwrap_or(f64::NAN),
        iterations_to_tolerance: SUMMARY_TOLERANCES
            .iter()
            .map(|&tol| ToleranceHit {
                tol,
                iterations: trace.iterations_to(tol),
            })
            .collect(),
        restart_count: trace.restart_iterations().len(),
        mean_restart_interval: mean_interval(&intervals),
        restart_intervals: intervals,
        oscillation_period: oscillation,
        predicted_restart_interval,
        predicted_period,
    })
}

pub fn run_experiment(config: &ExperimentConfig) -> Result<ExperimentOutput> {
    config.validate()?;
    let groups = match config.experiment {
        ExperimentKind::QSensitivity => vec![q_sensitivity(config)?],
        ExperimentKind::Trajectory2d => vec![trajectory_2d(config)?],
        ExperimentKind::RestartComparison => vec![restart_comparison(config)?],
        ExperimentKind::LogSumExp => logsumexp(config)?,
        ExperimentKind::Lasso => lasso(config)?,
        ExperimentKind::BoxQp => vec![boxqp(config)?],
    };
    let mut summaries = Vec::new();
    let mut runs = Vec::new();
    for group in groups {
        for run in group.runs {
            summaries.push(summarize(&run, &group.f_star_source, group.spectrum)?);
            runs.push(run);
        }
    }
    Ok(ExperimentOutput {
        summary: Summary {
            experiment: config.experiment.to_string(),
            seed: config.seed,
            runs: summaries,
        },
        runs,
    })
}

/// Runs `base` once per value of `param`, prefixing run ids with `param=value/`.
pub fn run_sweep(base: &ExperimentConfig, param: &str, values: &[f64]) -> Result<ExperimentOutput> {
    if values.is_empty() {
        return Err(Error::input("sweep needs at least one value"));
    }
    let mut summary = Summary {
        experiment: base.experiment.to_string(),
        seed: base.seed,
        runs: Vec::new(),
    };
    let mut runs = Vec::new();
    for &value in values {
        let mut config = base.clone();
        config.set_param(param, value)?;
        let out = run_experiment(&config)?;
        let prefix = format!("{param}={value}");
        for mut s in out.summary.runs {
            s.run_id = format!("{prefix}/{}", s.run_id);
            summary.runs.push(s);
        }
        for mut r in out.runs {
            r.run_id = format!("{prefix}/{}", r.run_id);
            runs.push(r);
        }
    }
    Ok(ExperimentOutput { summary, runs })
}

fn quadratic_run(q: &Quadratic, x0: &Vector, id: String, config: SolverConfig) -> Result<Run> {
    let trace = accelerated_scheme1(q, x0, &config)?.with_f_star(q.optimal_value());
    Ok(Run { run_id: id, trace })
}

fn quadratic_group(q: &Quadratic, runs: Vec<Run>) -> Group {
    Group {
        runs,
        f_star_source: "analytic".to_string(),
        spectrum: Some((q.mu(), q.l())),
    }
}

fn single_policy_lineup(config: &ExperimentConfig) -> Option<Vec<(String, RestartPolicy)>> {
    config.restart.as_ref().map(|p| vec![(p.to_string(), p.clone())])
}

fn q_sensitivity(config: &ExperimentConfig) -> Result<Group> {
    let n = config.n.unwrap_or(defaults::Q_SENSITIVITY_N);
    let cond = config.cond.unwrap_or(defaults::Q_SENSITIVITY_COND);
    let iters = config.max_iters.unwrap_or(defaults::Q_SENSITIVITY_ITERS);
    let q = gen_quadratic(n, cond, config.seed)?;
    let x0 = start_point(config.seed, n);
    let base = SolverConfig::for_lipschitz(q.l()).with_max_iters(iters);
    let runs = if let Some(lineup) = single_policy_lineup(config) {
        lineup
            .into_iter()
            .map(|(id, p)| quadratic_run(&q, &x0, id, base.clone().with_restart(p)))
            .collect::<Result<Vec<_>>>()?
    } else {
        let q_star = q.mu() / q.l();
        let lineup = [
            ("q=0", 0.0),
            ("q=q*/10", q_star / 10.0),
            ("q=q*/3", q_star / 3.0),
            ("q=q*", q_star),
            ("q=3q*", (3.0 * q_star).min(1.0)),
            ("q=10q*", (10.0 * q_star).min(1.0)),
            ("q=1", 1.0),
        ];
        lineup
            .into_iter()
            .map(|(id, qv)| quadratic_run(&q, &x0, id.to_string(), base.clone().with_q(qv)))
            .collect::<Result<Vec<_>>>()?
    };
    Ok(quadratic_group(&q, runs))
}

fn trajectory_2d(config: &ExperimentConfig) -> Result<Group> {
    let cond = config.cond.unwrap_or(defaults::TRAJECTORY_COND);
    let iters = config.max_iters.unwrap_or(defaults::TRAJECTORY_ITERS);
    let q = gen_quadratic(2, cond, config.seed)?;
    let x0 = start_point(config.seed, 2);
    let base = SolverConfig::for_lipschitz(q.l())
        .with_max_iters(iters)
        .recording_iterates();
    let lineup: Vec<(String, SolverConfig)> = match single_policy_lineup(config) {
        Some(l) => l
            .into_iter()
            .map(|(id, p)| (id, base.clone().with_restart(p)))
            .collect(),
        None => vec![
            ("q=q*".to_string(), base.clone().with_q(q.mu() / q.l())),
            ("q=0".to_string(), base.clone()),
            ("func".to_string(), base.clone().with_restart(RestartPolicy::function())),
            ("grad".to_string(), base.clone().with_restart(RestartPolicy::gradient())),
        ],
    };
    let runs = lineup
        .into_iter()
        .map(|(id, c)| quadratic_run(&q, &x0, id, c))
        .collect::<Result<Vec<_>>>()?;
    Ok(quadratic_group(&q, runs))
}

fn restart_comparison(config: &ExperimentConfig) -> Result<Group> {
    let n = config.n.unwrap_or(defaults::RESTART_N);
    let cond = config.cond.unwrap_or(defaults::RESTART_COND);
    let iters = config.max_iters.unwrap_or(defaults::RESTART_ITERS);
    let q = gen_quadratic(n, cond, config.seed)?;
    let x0 = start_point(config.seed, n);
    let base = SolverConfig::for_lipschitz(q.l()).with_max_iters(iters);
    let lineup: Vec<(String, SolverConfig)> = match single_policy_lineup(config) {
        Some(l) => l
            .into_iter()
            .map(|(id, p)| (id, base.clone().with_restart(p)))
            .collect(),
        None => {
            let bound = fixed_interval(q.mu(), q.l())?;
            let shorter = ((bound as f64 * 4.0 / 7.0).round() as usize).max(1);
            let mut lineup = vec![("none".to_string(), base.clone())];
            for k in [bound, shorter] {
                let p = RestartPolicy::fixed(k)?;
                lineup.push((p.to_string(), base.clone().with_restart(p)));
            }
            lineup.push(("func".to_string(), base.clone().with_restart(RestartPolicy::function())));
            lineup.push(("grad".to_string(), base.clone().with_restart(RestartPolicy::gradient())));
            lineup.push(("q=q*".to_string(), base.clone().with_q(q.mu() / q.l())));
            lineup
        }
    };
    let runs = lineup
        .into_iter()
        .map(|(id, c)| quadratic_run(&q, &x0, id, c))
        .collect::<Result<Vec<_>>>()?;
    Ok(quadratic_group(&q, runs))
}

fn attach_reference(mut runs: Vec<Run>, reference: &Trace, source: String) -> Group {
    let f_star = runs
        .iter()
        .flat_map(|r| r.trace.records.iter())
        .chain(reference.records.iter())
        .map(|r| r.f)
        .fold(f64::INFINITY, f64::min);
    for run in &mut runs {
        run.trace.f_star_ref = Some(f_star);
    }
    Group {
        runs,
        f_star_source: source,
        spectrum: None,
    }
}

fn reference_source(solver: &str, iters: usize) -> String {
    format!("min over lineup and {solver} with grad restart for {iters} iterations")
}

fn logsumexp(config: &ExperimentConfig) -> Result<Vec<Group>> {
    let n = config.n.unwrap_or(defaults::LOGSUMEXP_N);
    let m = config.m.unwrap_or(defaults::LOGSUMEXP_M);
    let iters = config.max_iters.unwrap_or(defaults::LOGSUMEXP_ITERS);
    let rhos: Vec<f64> = match config.rho {
        Some(r) => vec![r],
        None => defaults::LOGSUMEXP_RHOS.to_vec(),
    };
    let multi = rhos.len() > 1;
    let x0 = Vector::zeros(n);
    let base = SolverConfig::new(StepSize::Backtracking {
        initial: defaults::LOGSUMEXP_INITIAL_STEP,
    })
    .with_max_iters(iters);
    let mut groups = Vec::new();
    for rho in rhos {
        let obj: LogSumExp = gen_logsumexp(n, m, rho, config.seed)?;
        let prefix = multi.then(|| format!("rho={rho}"));
        let mut runs = Vec::new();
        match single_policy_lineup(config) {
            Some(l) => {
                for (id, p) in l {
                    let trace = accelerated_scheme1(&obj, &x0, &base.clone().with_restart(p))?;
                    runs.push(Run {
                        run_id: prefixed(&prefix, &id),
                        trace,
                    });
                }
            }
            None => {
                runs.push(Run {
                    run_id: prefixed(&prefix, "gd"),
                    trace: gradient_descent(&obj, &x0, &base)?,
                });
                for (id, p) in [
                    ("accel", RestartPolicy::none()),
                    ("func", RestartPolicy::function()),
                    ("grad", RestartPolicy::gradient()),
                ] {
                    let trace = accelerated_scheme1(&obj, &x0, &base.clone().with_restart(p))?;
                    runs.push(Run {
                        run_id: prefixed(&prefix, id),
                        trace,
                    });
                }
            }
        }
        let long = iters * REFERENCE_BUDGET_FACTOR;
        let reference = accelerated_scheme1(
            &obj,
            &x0,
            &base
                .clone()
                .with_max_iters(long)
                .with_restart(RestartPolicy::gradient()),
        )?;
        groups.push(attach_reference(
            runs,
            &reference,
            reference_source("accelerated gradient", long),
        ));
    }
    Ok(groups)
}

fn lasso(config: &ExperimentConfig) -> Result<Vec<Group>> {
    let n = config.n.unwrap_or(defaults::LASSO_N);
    let rho = config.rho.unwrap_or(defaults::LASSO_RHO);
    let iters = config.max_iters.unwrap_or(defaults::LASSO_ITERS);
    let sizes: Vec<(usize, usize)> = match (config.m, config.s) {
        (None, None) => defaults::LASSO_SIZES.to_vec(),
        (Some(m), Some(s)) => vec![(m, s)],
        (Some(m), None) => vec![(m, (m / 5).max(1))],
        (None, Some(s)) => vec![(5 * s, s)],
    };
    let multi = sizes.len() > 1;
    let x0 = Vector::zeros(n);
    let mut groups = Vec::new();
    for (m, s) in sizes {
        let problem: LassoProblem = gen_lasso(n, m, s, rho, defaults::LASSO_NOISE, config.seed)?;
        let prefix = multi.then(|| format!("m{m}_s{s}"));
        let base =
            SolverConfig::for_lipschitz(crate::oracles::CompositeObjective::lipschitz(&problem)).with_max_iters(iters);
        let mut runs = Vec::new();
        match single_policy_lineup(config) {
            Some(l) => {
                for (id, p) in l {
                    let trace = fista(&problem, &x0, &base.clone().with_restart(p))?;
                    runs.push(Run {
                        run_id: prefixed(&prefix, &id),
                        trace,
                    });
                }
            }
            None => {
                runs.push(Run {
                    run_id: prefixed(&prefix, "ista"),
                    trace: ista(&problem, &x0, &base)?,
                });
                for (id, p) in [
                    ("fista", RestartPolicy::none()),
                    ("func", RestartPolicy::function()),
                    ("grad", RestartPolicy::gradient()),
                ] {
                    let trace = fista(&problem, &x0, &base.clone().with_restart(p))?;
                    runs.push(Run {
                        run_id: prefixed(&prefix, id),
                        trace,
                    });
                }
            }
        }
        let long = iters * REFERENCE_BUDGET_FACTOR;
        let reference = fista(
            &problem,
            &x0,
            &base
                .clone()
                .with_max_iters(long)
                .with_restart(RestartPolicy::gradient()),
        )?;
        groups.push(attach_reference(runs, &reference, reference_source("FISTA", long)));
    }
    Ok(groups)
}

fn boxqp(config: &ExperimentConfig) -> Result<Group> {
    let n = config.n.unwrap_or(defaults::BOXQP_N);
    let cond = config.cond.unwrap_or(defaults::BOXQP_COND);
    let iters = config.max_iters.unwrap_or(defaults::BOXQP_ITERS);
    let qp: BoxQp = gen_boxqp(n, cond, config.seed)?;
    let x0 = Vector::zeros(n);
    let base = SolverConfig::for_lipschitz(crate::oracles::CompositeObjective::lipschitz(&qp)).with_max_iters(iters);
    let mut runs = Vec::new();
    match single_policy_lineup(config) {
        Some(l) => {
            for (id, p) in l {
                let trace = accel_projected_gradient(&qp, &x0, &base.clone().with_restart(p))?;
                runs.push(Run { run_id: id, trace });
            }
        }
        None => {
            runs.push(Run {
                run_id: "pg".to_string(),
                trace: projected_gradient(&qp, &x0, &base)?,
            });
            for (id, p) in [
                ("apg", RestartPolicy::none()),
                ("func", RestartPolicy::function()),
                ("grad", RestartPolicy::gradient()),
            ] {
                let trace = accel_projected_gradient(&qp, &x0, &base.clone().with_restart(p))?;
                runs.push(Run {
                    run_id: id.to_string(),
                    trace,
                });
            }
        }
    }
    let long = iters * REFERENCE_BUDGET_FACTOR;
    let reference = accel_projected_gradient(
        &qp,
        &x0,
        &base
            .clone()
            .with_max_iters(long)
            .with_restart(RestartPolicy::gradient()),
    )?;
    Ok(attach_reference(
        runs,
        &reference,
        reference_source("accelerated projected gradient", long),
    ))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn kind_names_round_trip() {
        for kind in ExperimentKind::ALL {
            assert_eq!(kind.as_str().parse::<ExperimentKind>().unwrap(), kind);
            let json = serde_json::to_string(&kind).unwrap();
            assert_eq!(json, format!("\"{kind}\""));
        }
        assert!("fig9".parse::<ExperimentKind>().is_err());
    }

    #[test]
    fn rejects_parameters_that_do_not_apply() {
        let mut c = ExperimentConfig::new(ExperimentKind::QSensitivity, 1);
        c.m = Some(10);
        assert!(matches!(run_experiment(&c), Err(Error::Input(_))));
        assert!(c.set_param("bogus", 1.0).is_err());
        assert!(c.set_param("n", 2.5).is_err());
    }

    #[test]
    fn default_restart_comparison_bound_is_700() {
        let l = 1.0;
        let mu = 1.0 / defaults::RESTART_COND;
        assert_eq!(fixed_interval(mu, l).unwrap(), 700);
    }

    #[test]
    fn q_sensitivity_lineup_and_tolerance_monotonicity() {
        let mut c = ExperimentConfig::new(ExperimentKind::QSensitivity, 3);
        c.n = Some(30);
        c.cond = Some(1e3);
        c.max_iters = Some(800);
        let out = run_experiment(&c).unwrap();
        let ids: Vec<&str> = out.runs.iter().map(|r| r.run_id.as_str()).collect();
        assert_eq!(ids, ["q=0", "q=q*/10", "q=q*/3", "q=q*", "q=3q*", "q=10q*", "q=1"]);
        for s in &out.summary.runs {
            let hits: Vec<Option<usize>> = s.iterations_to_tolerance.iter().map(|h| h.iterations).collect();
            for w in hits.windows(2) {
                match (w[0], w[1]) {
                    (Some(a), Some(b)) => assert!(a <= b),
                    (None, Some(_)) => panic!("tighter tolerance reached before looser"),
                    _ => {}
                }
            }
            assert!(s.predicted_restart_interval.is_some());
        }
    }

    #[test]
    fn single_policy_mode() {
        let mut c = ExperimentConfig::new(ExperimentKind::RestartComparison, 5);
        c.n = Some(20);
        c.cond = Some(100.0);
        c.max_iters = Some(300);
        c.restart = Some(RestartPolicy::function());
        let out = run_experiment(&c).unwrap();
        assert_eq!(out.runs.len(), 1);
        assert_eq!(out.runs[0].run_id, "func");
        assert!(!out.runs[0].trace.restart_iterations().is_empty());
    }

    #[test]
    fn sweep_prefixes_run_ids() {
        let mut c = ExperimentConfig::new(ExperimentKind::Trajectory2d, 2);
        c.max_iters = Some(50);
        let out = run_sweep(&c, "cond", &[10.0, 50.0]).unwrap();
        assert_eq!(out.runs.len(), 8);
        assert!(out.runs[0].run_id.starts_with("cond=10/"));
        assert!(out.runs[7].run_id.starts_with("cond=50/"));
    }
}
