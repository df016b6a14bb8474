use std::fmt;
use std::fs::File;
use std::io::{BufRead, BufWriter, Write};
use std::path::Path;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::Run;
use crate::error::{Error, Result};
use crate::solvers::TraceRecord;

pub const TRACE_CSV_HEADER: &str = "run_id,k,f,f_rel,beta,step,restarted";
pub const TRAJECTORY_CSV_HEADER: &str = "run_id,k,x1,x2";

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExportFormat {
    Csv,
    Json,
}

impl FromStr for ExportFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "csv" => Ok(ExportFormat::Csv),
            "json" => Ok(ExportFormat::Json),
            other => Err(Error::input(format!("unknown format `{other}` (expected csv or json)"))),
        }
    }
}

impl fmt::Display for ExportFormat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ExportFormat::Csv => "csv",
            ExportFormat::Json => "json",
        })
    }
}

/// 17 significant digits, enough to round-trip any `f64`.
fn num(x: f64) -> String {
    format!("{x:.16e}")
}

fn f_rel_column(run: &Run) -> Vec<Option<f64>> {
    match run.trace.relative_suboptimality() {
        Some(rel) => rel.into_iter().map(Some).collect(),
        None => vec![None; run.trace.records.len()],
    }
}

pub fn write_traces_csv<W: Write>(runs: &[Run], mut out: W) -> Result<()> {
    writeln!(out, "{TRACE_CSV_HEADER}")?;
    for run in runs {
        check_run_id(&run.run_id)?;
        for (r, rel) in run.trace.records.iter().zip(f_rel_column(run)) {
            writeln!(
                out,
                "{},{},{},{},{},{},{}",
                run.run_id,
                r.k,
                num(r.f),
                rel.map(num).unwrap_or_default(),
                num(r.beta),
                num(r.step),
                u8::from(r.restarted)
            )?;
        }
    }
    out.flush()?;
    Ok(())
}

fn check_run_id(id: &str) -> Result<()> {
    if id.contains([',', '\n', '"']) {
        return Err(Error::input(format!("run id `{id}` cannot be written as a CSV field")));
    }
    Ok(())
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExportedRecord {
    pub k: usize,
    pub f: f64,
    pub f_rel: Option<f64>,
    pub beta: f64,
    pub step: f64,
    pub restarted: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExportedRun {
    pub run_id: String,
    pub f_star_ref: Option<f64>,
    pub records: Vec<ExportedRecord>,
}

impl ExportedRun {
    pub fn trace_records(&self) -> Vec<TraceRecord> {
        self.records
            .iter()
            .map(|r| TraceRecord {
                k: r.k,
                f: r.f,
                beta: r.beta,
                step: r.step,
                restarted: r.restarted,
            })
            .collect()
    }
}

fn exported(runs: &[Run]) -> Vec<ExportedRun> {
    runs.iter()
        .map(|run| ExportedRun {
            run_id: run.run_id.clone(),
            f_star_ref: run.trace.f_star_ref,
            records: run
                .trace
                .records
                .iter()
                .zip(f_rel_column(run))
                .map(|(r, f_rel)| ExportedRecord {
                    k: r.k,
                    f: r.f,
                    f_rel,
                    beta: r.beta,
                    step: r.step,
                    restarted: r.restarted,
                })
                .collect(),
        })
        .collect()
}

pub fn write_traces_json<W: Write>(runs: &[Run], mut out: W) -> Result<()> {
    serde_json::to_writer_pretty(&mut out, &exported(runs))?;
    writeln!(out)?;
    out.flush()?;
    Ok(())
}

pub fn export_traces(runs: &[Run], path: &Path, format: ExportFormat) -> Result<()> {
    let out = BufWriter::new(File::create(path)?);
    match format {
        ExportFormat::Csv => write_traces_csv(runs, out),
        ExportFormat::Json => write_traces_json(runs, out),
    }
}

fn parse_field<T: FromStr>(field: Option<&str>, line: usize, name: &str) -> Result<T> {
    field
        .and_then(|s| s.parse().ok())
        .ok_or_else(|| Error::input(format!("line {line}: bad or missing `{name}`")))
}

/// Reads a trace CSV back, grouping rows by run id in order of appearance.
pub fn read_traces_csv<R: BufRead>(input: R) -> Result<Vec<ExportedRun>> {
    let mut lines = input.lines();
    let header = lines.next().transpose()?.unwrap_or_default();
    if header.trim_end() != TRACE_CSV_HEADER {
        return Err(Error::input(format!("unexpected header `{header}`")));
    }
    let mut runs: Vec<ExportedRun> = Vec::new();
    for (i, line) in lines.enumerate() {
        let line = line?;
        if line.is_empty() {
            continue;
        }
        let lineno = i + 2;
        let mut fields = line.split(',');
        let run_id = fields.next().unwrap_or_default().to_string();
        let k = parse_field(fields.next(), lineno, "k")?;
        let f = parse_field(fields.next(), lineno, "f")?;
        let f_rel = match fields.next() {
            Some("") => None,
            other => Some(parse_field(other, lineno, "f_rel")?),
        };
        let beta = parse_field(fields.next(), lineno, "beta")?;
        let step = parse_field(fields.next(), lineno, "step")?;
        let restarted = match fields.next() {
            Some("0") => false,
            Some("1") => true,
            _ => return Err(Error::input(format!("line {lineno}: restarted must be 0 or 1"))),
        };
        let record = ExportedRecord {
            k,
            f,
            f_rel,
            beta,
            step,
            restarted,
        };
        match runs.last_mut() {
            Some(run) if run.run_id == run_id => run.records.push(record),
            _ => runs.push(ExportedRun {
                run_id,
                f_star_ref: None,
                records: vec![record],
            }),
        }
    }
    Ok(runs)
}

pub fn read_traces_json(s: &str) -> Result<Vec<ExportedRun>> {
    Ok(serde_json::from_str(s)?)
}

/// First two iterate coordinates of runs that kept their iterates.
pub fn write_trajectories_csv<W: Write>(runs: &[Run], mut out: W) -> Result<()> {
    writeln!(out, "{TRAJECTORY_CSV_HEADER}")?;
    for run in runs {
        check_run_id(&run.run_id)?;
        for (k, x) in run.trace.iterates.iter().enumerate() {
            if x.len() < 2 {
                return Err(Error::input("trajectory export needs iterates of dimension >= 2"));
            }
            writeln!(out, "{},{},{},{}", run.run_id, k, num(x[0]), num(x[1]))?;
        }
    }
    out.flush()?;
    Ok(())
}

pub fn export_trajectories(runs: &[Run], path: &Path) -> Result<()> {
    write_trajectories_csv(runs, BufWriter::new(File::create(path)?))
}
