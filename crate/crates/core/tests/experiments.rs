use std::io::BufReader;

use restartkit::experiments::{
    export_traces, read_traces_csv, read_traces_json, run_experiment, run_sweep, write_traces_csv, write_traces_json,
    write_trajectories_csv, ExportFormat, TRACE_CSV_HEADER, TRAJECTORY_CSV_HEADER,
};
use restartkit::{Error, ExperimentConfig, ExperimentKind, RestartPolicy};

fn small(kind: ExperimentKind, seed: u64, params: &[(&str, f64)]) -> ExperimentConfig {
    let mut cfg = ExperimentConfig::new(kind, seed);
    for &(name, value) in params {
        cfg.set_param(name, value).unwrap();
    }
    cfg
}

#[test]
fn csv_round_trip_is_exact() {
    let out = run_experiment(&small(
        ExperimentKind::RestartComparison,
        3,
        &[("n", 40.0), ("max_iters", 300.0)],
    ))
    .unwrap();
    let mut bytes = Vec::new();
    write_traces_csv(&out.runs, &mut bytes).unwrap();
    let text = String::from_utf8(bytes.clone()).unwrap();
    assert_eq!(text.lines().next().unwrap(), TRACE_CSV_HEADER);

    let back = read_traces_csv(BufReader::new(&bytes[..])).unwrap();
    assert_eq!(back.len(), out.runs.len());
    for (run, exported) in out.runs.iter().zip(&back) {
        assert_eq!(run.run_id, exported.run_id);
        assert_eq!(run.trace.records, exported.trace_records());
        let rel = run.trace.relative_suboptimality().unwrap();
        let read: Vec<f64> = exported.records.iter().map(|r| r.f_rel.unwrap()).collect();
        assert_eq!(rel, read);
    }
}

#[test]
fn json_round_trip_matches_csv() {
    let out = run_experiment(&small(
        ExperimentKind::LogSumExp,
        1,
        &[("max_iters", 60.0), ("rho", 0.5)],
    ))
    .unwrap();
    let mut json = Vec::new();
    write_traces_json(&out.runs, &mut json).unwrap();
    let mut csv = Vec::new();
    write_traces_csv(&out.runs, &mut csv).unwrap();
    let from_json = read_traces_json(std::str::from_utf8(&json).unwrap()).unwrap();
    let from_csv = read_traces_csv(BufReader::new(&csv[..])).unwrap();
    assert_eq!(from_json.len(), from_csv.len());
    for (a, b) in from_json.iter().zip(&from_csv) {
        assert_eq!(a.run_id, b.run_id);
        assert_eq!(a.records, b.records);
    }
}

#[test]
fn export_to_file_in_both_formats() {
    let dir = tempfile::tempdir().unwrap();
    let out = run_experiment(&small(ExperimentKind::BoxQp, 2, &[("n", 20.0), ("max_iters", 50.0)])).unwrap();
    let csv = dir.path().join("t.csv");
    let json = dir.path().join("t.json");
    export_traces(&out.runs, &csv, ExportFormat::Csv).unwrap();
    export_traces(&out.runs, &json, ExportFormat::Json).unwrap();
    let rows = std::fs::read_to_string(&csv).unwrap().lines().count();
    let records: usize = out.runs.iter().map(|r| r.trace.records.len()).sum();
    assert_eq!(rows, records + 1);
    let parsed = read_traces_json(&std::fs::read_to_string(&json).unwrap()).unwrap();
    assert_eq!(parsed.len(), 4);
}

#[test]
fn lineup_run_ids() {
    let ids = |kind, params: &[(&str, f64)]| -> Vec<String> {
        run_experiment(&small(kind, 0, params))
            .unwrap()
            .runs
            .into_iter()
            .map(|r| r.run_id)
            .collect()
    };
    assert_eq!(
        ids(ExperimentKind::Trajectory2d, &[("max_iters", 20.0)]),
        ["q=q*", "q=0", "func", "grad"]
    );
    assert_eq!(
        ids(ExperimentKind::BoxQp, &[("n", 10.0), ("max_iters", 10.0)]),
        ["pg", "apg", "func", "grad"]
    );
    assert_eq!(
        ids(
            ExperimentKind::Lasso,
            &[("n", 50.0), ("m", 20.0), ("s", 4.0), ("max_iters", 10.0)]
        ),
        ["ista", "fista", "func", "grad"]
    );
    let both_sizes = ids(ExperimentKind::Lasso, &[("n", 600.0), ("max_iters", 5.0)]);
    assert_eq!(both_sizes.len(), 8);
    assert_eq!(both_sizes[0], "m100_s20/ista");
    assert_eq!(both_sizes[7], "m500_s100/grad");
    let q = ids(ExperimentKind::QSensitivity, &[("n", 10.0), ("max_iters", 10.0)]);
    assert_eq!(q.first().map(String::as_str), Some("q=0"));
    assert_eq!(q.last().map(String::as_str), Some("q=1"));
}

#[test]
fn single_policy_mode_runs_one_configuration() {
    let mut cfg = small(
        ExperimentKind::RestartComparison,
        0,
        &[("n", 30.0), ("max_iters", 200.0)],
    );
    cfg.restart = Some(RestartPolicy::gradient());
    let out = run_experiment(&cfg).unwrap();
    assert_eq!(out.runs.len(), 1);
    assert_eq!(out.runs[0].run_id, "grad");
}

#[test]
fn summary_reports_intervals_and_predictions() {
    let out = run_experiment(&small(
        ExperimentKind::RestartComparison,
        0,
        &[("n", 60.0), ("cond", 1e3), ("max_iters", 2000.0)],
    ))
    .unwrap();
    let func = out.summary.run("func").unwrap();
    assert!(func.restart_count >= 2);
    assert!(func.mean_restart_interval.unwrap() > 0.0);
    let predicted = func.predicted_restart_interval.unwrap();
    assert!((predicted - (std::f64::consts::PI + 3.0) / 2.0 * 1e3f64.sqrt()).abs() < 1e-9);
    assert!(func.iterations_to(1e-8).is_some());
    let none = out.summary.run("none").unwrap();
    assert_eq!(none.restart_count, 0);
    assert_eq!(none.f_star, 0.0);
}

#[test]
fn sweep_prefixes_run_ids() {
    let base = small(ExperimentKind::BoxQp, 0, &[("n", 10.0), ("max_iters", 20.0)]);
    let out = run_sweep(&base, "cond", &[10.0, 100.0]).unwrap();
    assert_eq!(out.runs.len(), 8);
    assert_eq!(out.runs[0].run_id, "cond=10/pg");
    assert_eq!(out.runs[7].run_id, "cond=100/grad");
    assert_eq!(out.summary.runs.len(), 8);
    assert!(matches!(run_sweep(&base, "rho", &[1.0]), Err(Error::Input(_))));
    assert!(matches!(run_sweep(&base, "cond", &[]), Err(Error::Input(_))));
}

#[test]
fn trajectories_only_for_two_dimensional_runs() {
    let out = run_experiment(&small(ExperimentKind::Trajectory2d, 4, &[("max_iters", 30.0)])).unwrap();
    let mut bytes = Vec::new();
    write_trajectories_csv(&out.runs, &mut bytes).unwrap();
    let text = String::from_utf8(bytes).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next().unwrap(), TRAJECTORY_CSV_HEADER);
    assert_eq!(lines.count(), 4 * 31);
}

#[test]
fn invalid_configs_are_rejected() {
    let mut cfg = ExperimentConfig::new(ExperimentKind::Lasso, 0);
    assert!(cfg.set_param("cond", 10.0).is_err() || run_experiment(&cfg).is_err());
    let mut cfg = ExperimentConfig::new(ExperimentKind::BoxQp, 0);
    cfg.n = Some(0);
    assert!(matches!(run_experiment(&cfg), Err(Error::Input(_))));
    let mut cfg = ExperimentConfig::new(ExperimentKind::RestartComparison, 0);
    cfg.cond = Some(0.5);
    assert!(matches!(run_experiment(&cfg), Err(Error::Input(_))));
    assert!("nonsense".parse::<ExperimentKind>().is_err());
}
