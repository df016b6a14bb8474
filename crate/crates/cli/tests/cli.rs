use std::fs;
use std::process::{Command, Output};

fn restartkit(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_restartkit"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

#[test]
fn run_writes_csv_to_stdout() {
    let out = restartkit(&[
        "run",
        "--experiment",
        "boxqp",
        "--n",
        "10",
        "--max-iters",
        "20",
        "--seed",
        "3",
    ]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let text = stdout(&out);
    let mut lines = text.lines();
    assert_eq!(lines.next().unwrap(), "run_id,k,f,f_rel,beta,step,restarted");
    assert_eq!(lines.count(), 4 * 21);
    // One report line per run on stderr.
    assert_eq!(String::from_utf8_lossy(&out.stderr).lines().count(), 4);
}

#[test]
fn run_is_deterministic() {
    let args = [
        "run",
        "--experiment",
        "restart_comparison",
        "--n",
        "30",
        "--max-iters",
        "150",
        "--seed",
        "9",
    ];
    assert_eq!(restartkit(&args).stdout, restartkit(&args).stdout);
}

#[test]
fn json_output_and_summary_files() {
    let dir = tempfile::tempdir().unwrap();
    let traces = dir.path().join("traces.json");
    let summary = dir.path().join("summary.json");
    let out = restartkit(&[
        "run",
        "--experiment",
        "logsumexp",
        "--rho",
        "0.5",
        "--max-iters",
        "40",
        "--format",
        "json",
        "--out",
        traces.to_str().unwrap(),
        "--summary",
        summary.to_str().unwrap(),
    ]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    assert!(out.stdout.is_empty());
    let runs: serde_json::Value = serde_json::from_str(&fs::read_to_string(&traces).unwrap()).unwrap();
    assert_eq!(runs.as_array().unwrap().len(), 4);
    let summary: serde_json::Value = serde_json::from_str(&fs::read_to_string(&summary).unwrap()).unwrap();
    assert_eq!(summary["experiment"], "logsumexp");
    assert_eq!(summary["runs"].as_array().unwrap().len(), 4);
}

#[test]
fn single_restart_policy() {
    let out = restartkit(&[
        "run",
        "--experiment",
        "restart_comparison",
        "--n",
        "20",
        "--max-iters",
        "50",
        "--restart",
        "fixed:10",
    ]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.lines().skip(1).all(|l| l.starts_with("fixed:10,")));
    let restarts = text.lines().skip(1).filter(|l| l.ends_with(",1")).count();
    assert_eq!(restarts, 5);
}

#[test]
fn config_file_with_flag_override() {
    let dir = tempfile::tempdir().unwrap();
    let config = dir.path().join("cfg.json");
    fs::write(
        &config,
        r#"{"experiment": "boxqp", "n": 12, "max_iters": 30, "seed": 1}"#,
    )
    .unwrap();
    let out = restartkit(&["run", "--config", config.to_str().unwrap(), "--max-iters", "5"]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    assert_eq!(stdout(&out).lines().count(), 1 + 4 * 6);

    fs::write(&config, r#"{"experiment": "boxqp", "bogus": 1}"#).unwrap();
    let out = restartkit(&["run", "--config", config.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn trajectory_export() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("xy.csv");
    let out = restartkit(&[
        "run",
        "--experiment",
        "trajectory_2d",
        "--max-iters",
        "10",
        "--trajectory",
        path.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    let text = fs::read_to_string(&path).unwrap();
    assert_eq!(text.lines().next().unwrap(), "run_id,k,x1,x2");
    assert_eq!(text.lines().count(), 1 + 4 * 11);

    let out = restartkit(&["run", "--experiment", "boxqp", "--trajectory", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn sweep_prefixes_runs() {
    let out = restartkit(&[
        "sweep",
        "--experiment",
        "boxqp",
        "--n",
        "8",
        "--max-iters",
        "5",
        "--param",
        "cond=10,1000",
    ]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let text = stdout(&out);
    assert!(text.lines().nth(1).unwrap().starts_with("cond=10/pg,"));
    assert!(text.lines().last().unwrap().starts_with("cond=1000/grad,"));
}

#[test]
fn regimes_table() {
    let out = restartkit(&["regimes", "--beta", "0,0.5,0.99", "--lam-ratio", "0.01,1"]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert_eq!(text.lines().count(), 1 + 6);
    assert!(text.contains("under_damped") && text.contains("over_damped"));
}

#[test]
fn input_errors_exit_with_two() {
    for args in [
        vec!["run", "--experiment", "nope"],
        vec!["run"],
        vec!["run", "--experiment", "lasso", "--cond", "10"],
        vec!["run", "--experiment", "boxqp", "--restart", "sometimes"],
        vec!["run", "--experiment", "boxqp", "--format", "xml"],
        vec!["sweep", "--experiment", "boxqp", "--param", "cond"],
        vec!["regimes", "--beta", "1.5", "--lam-ratio", "0.1"],
        vec!["frobnicate"],
    ] {
        let out = restartkit(&args);
        assert_eq!(out.status.code(), Some(2), "{args:?}");
        assert!(!out.stderr.is_empty());
    }
}

#[test]
fn io_errors_exit_with_one() {
    let dir = tempfile::tempdir().unwrap();
    let missing = dir.path().join("no/such/dir/out.csv");
    let out = restartkit(&[
        "run",
        "--experiment",
        "boxqp",
        "--n",
        "5",
        "--max-iters",
        "3",
        "--out",
        missing.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(1));
    let out = restartkit(&["run", "--config", dir.path().join("absent.json").to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
}
