use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde::Deserialize;

use restartkit::dynamics::{regime_sweep, write_regime_csv};
use restartkit::experiments::{
    export_trajectories, run_experiment, run_sweep, write_traces_csv, write_traces_json, ExportFormat,
};
use restartkit::{Error, ExperimentConfig, ExperimentKind, ExperimentOutput, RestartPolicy, Summary};

#[derive(Parser)]
#[command(name = "restartkit", version, about = "Run accelerated-gradient restart experiments")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run one experiment and export its traces.
    Run(RunArgs),
    /// Run an experiment once per value of a parameter.
    Sweep {
        #[command(flatten)]
        run: RunArgs,
        /// `name=v1,v2,...`
        #[arg(long)]
        param: String,
    },
    /// Tabulate damping regimes of the per-mode recurrence.
    Regimes {
        /// Comma-separated momentum values in [0, 1].
        #[arg(long, value_delimiter = ',', required = true)]
        beta: Vec<f64>,
        /// Comma-separated eigenvalue ratios in (0, 1].
        #[arg(long, value_delimiter = ',', required = true)]
        lam_ratio: Vec<f64>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Args)]
struct RunArgs {
    #[arg(long)]
    experiment: Option<String>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    n: Option<usize>,
    #[arg(long)]
    m: Option<usize>,
    #[arg(long)]
    s: Option<usize>,
    #[arg(long)]
    rho: Option<f64>,
    #[arg(long)]
    cond: Option<f64>,
    #[arg(long)]
    max_iters: Option<usize>,
    /// Run only the accelerated method under this policy (`none`, `fixed:<k>`, `func`, `grad`).
    #[arg(long)]
    restart: Option<String>,
    /// Trace output; standard output when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
    /// `csv` or `json`.
    #[arg(long)]
    format: Option<String>,
    /// JSON file with the same keys as these flags; flags take precedence.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Write the JSON summary here.
    #[arg(long)]
    summary: Option<PathBuf>,
    /// Write `run_id,k,x1,x2` iterates here (trajectory_2d only).
    #[arg(long)]
    trajectory: Option<PathBuf>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct FileConfig {
    experiment: Option<String>,
    seed: Option<u64>,
    n: Option<usize>,
    m: Option<usize>,
    s: Option<usize>,
    rho: Option<f64>,
    cond: Option<f64>,
    max_iters: Option<usize>,
    restart: Option<String>,
    out: Option<PathBuf>,
    format: Option<String>,
    summary: Option<PathBuf>,
    trajectory: Option<PathBuf>,
}

struct Resolved {
    config: ExperimentConfig,
    out: Option<PathBuf>,
    format: ExportFormat,
    summary: Option<PathBuf>,
    trajectory: Option<PathBuf>,
}

fn resolve(args: RunArgs) -> Result<Resolved, Error> {
    let file = match &args.config {
        Some(path) => {
            let text = fs::read_to_string(path)?;
            serde_json::from_str::<FileConfig>(&text)
                .map_err(|e| Error::input(format!("config file {}: {e}", path.display())))?
        }
        None => FileConfig::default(),
    };
    let experiment: ExperimentKind = args
        .experiment
        .or(file.experiment)
        .ok_or_else(|| Error::input("--experiment is required"))?
        .parse()?;
    let restart = args
        .restart
        .or(file.restart)
        .map(|s| s.parse::<RestartPolicy>())
        .transpose()?;
    let format = args
        .format
        .or(file.format)
        .map(|s| s.parse())
        .transpose()?
        .unwrap_or(ExportFormat::Csv);
    let config = ExperimentConfig {
        experiment,
        seed: args.seed.or(file.seed).unwrap_or(0),
        n: args.n.or(file.n),
        m: args.m.or(file.m),
        s: args.s.or(file.s),
        rho: args.rho.or(file.rho),
        cond: args.cond.or(file.cond),
        max_iters: args.max_iters.or(file.max_iters),
        restart,
    };
    let trajectory = args.trajectory.or(file.trajectory);
    if trajectory.is_some() && experiment != ExperimentKind::Trajectory2d {
        return Err(Error::input("--trajectory applies only to trajectory_2d"));
    }
    Ok(Resolved {
        config,
        out: args.out.or(file.out),
        format,
        summary: args.summary.or(file.summary),
        trajectory,
    })
}

fn parse_param(spec: &str) -> Result<(String, Vec<f64>), Error> {
    let (name, values) = spec
        .split_once('=')
        .ok_or_else(|| Error::input(format!("--param must look like name=v1,v2, got `{spec}`")))?;
    let values = values
        .split(',')
        .map(|v| {
            v.trim()
                .parse::<f64>()
                .map_err(|_| Error::input(format!("bad value `{v}` for parameter {name}")))
        })
        .collect::<Result<Vec<_>, _>>()?;
    Ok((name.trim().to_string(), values))
}

fn write_output(target: Option<&Path>, write: impl FnOnce(&mut dyn Write) -> Result<(), Error>) -> Result<(), Error> {
    match target {
        Some(path) => {
            let mut file = io::BufWriter::new(fs::File::create(path)?);
            write(&mut file)?;
            file.flush()?;
        }
        None => {
            let stdout = io::stdout();
            let mut lock = stdout.lock();
            write(&mut lock)?;
        }
    }
    Ok(())
}

fn report(summary: &Summary) {
    for run in &summary.runs {
        let hits: Vec<String> = run
            .iterations_to_tolerance
            .iter()
            .map(|h| match h.iterations {
                Some(k) => format!("{:e}:{k}", h.tol),
                None => format!("{:e}:-", h.tol),
            })
            .collect();
        eprintln!(
            "{:<24} iters={:<6} f_rel={:<12.3e} restarts={:<4} to_tol=[{}]",
            run.run_id,
            run.iterations,
            run.final_f_rel,
            run.restart_count,
            hits.join(" ")
        );
    }
}

fn emit(output: &ExperimentOutput, resolved: &Resolved) -> Result<(), Error> {
    write_output(resolved.out.as_deref(), |w| match resolved.format {
        ExportFormat::Csv => write_traces_csv(&output.runs, w),
        ExportFormat::Json => write_traces_json(&output.runs, w),
    })?;
    if let Some(path) = &resolved.summary {
        let mut text = serde_json::to_string_pretty(&output.summary)?;
        text.push('\n');
        fs::write(path, text)?;
    }
    if let Some(path) = &resolved.trajectory {
        export_trajectories(&output.runs, path)?;
    }
    report(&output.summary);
    Ok(())
}

fn execute(cli: Cli) -> Result<(), Error> {
    match cli.command {
        Command::Run(args) => {
            let resolved = resolve(args)?;
            let output = run_experiment(&resolved.config)?;
            emit(&output, &resolved)
        }
        Command::Sweep { run, param } => {
            let (name, values) = parse_param(&param)?;
            let resolved = resolve(run)?;
            let output = run_sweep(&resolved.config, &name, &values)?;
            emit(&output, &resolved)
        }
        Command::Regimes { beta, lam_ratio, out } => {
            let rows = regime_sweep(&beta, &lam_ratio)?;
            write_output(out.as_deref(), |w| write_regime_csv(&rows, w))
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match execute(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err}");
            let code = match err {
                Error::Input(_) => 2,
                Error::Numeric { .. } => 3,
                Error::Io(_) | Error::Format(_) => 1,
            };
            ExitCode::from(code)
        }
    }
}
