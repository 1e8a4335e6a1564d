//! Trace CSV, summary JSON, and plots for a finished run.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use faa_core::accelerator::{CsSchedule, DepthSchedule};
use faa_core::{IterationRecord, SolverConfig};
use serde_json::{json, Value};

use crate::error::HarnessError;
use crate::plot::{column_raster, log_line_plot, Series};
use crate::runner::{status_name, RunReport};

pub const SCHEMA_VERSION: u32 = 1;
pub const CSV_HEADER: &str = "k,residual,theta,cond_F,m_k,cs,beta,kept_mask";
pub const TRACE_FILE: &str = "trace.csv";
pub const SUMMARY_FILE: &str = "summary.json";

/// `1`/`0` per pre-filter column, newest first.
pub fn mask_string(mask: &[bool]) -> String {
    mask.iter().map(|&b| if b { '1' } else { '0' }).collect()
}

/// One row per residual evaluation `k = 0..=K`. Floats use the shortest
/// round-trip representation, so identical runs give identical bytes.
pub fn trace_csv(records: &[IterationRecord]) -> String {
    let mut out = String::with_capacity(64 * (records.len() + 1));
    out.push_str(CSV_HEADER);
    out.push('\n');
    for r in records {
        let _ = writeln!(
            out,
            "{},{:e},{:e},{:e},{},{},{},{}",
            r.k,
            r.residual_norm,
            r.theta,
            r.cond_f,
            r.depth,
            r.cs_used,
            r.beta_used,
            mask_string(&r.kept_mask)
        );
    }
    out
}

/// JSON numbers cannot hold NaN or infinity; those become strings.
pub fn json_f64(x: f64) -> Value {
    if x.is_finite() {
        json!(x)
    } else {
        json!(x.to_string())
    }
}

/// Solver settings after defaults and keywords were applied.
pub fn resolved(solver: &SolverConfig) -> Value {
    let cs = match solver.cs {
        CsSchedule::Constant(c) => json!(c),
        CsSchedule::Dynamic => json!("dynamic"),
    };
    let depth_schedule = match solver.depth_schedule {
        DepthSchedule::Constant => json!("constant"),
        DepthSchedule::Multilevel { tau, m_early, m_late } => {
            json!({"tau": tau, "m_early": m_early, "m_late": m_late})
        }
    };
    json!({
        "strategy": format!("{:?}", solver.strategy),
        "depth": solver.depth,
        "beta": solver.beta.beta(0),
        "cs": cs,
        "kappa": solver.kappa_bar,
        "order": format!("{:?}", solver.order),
        "sharpen": solver.sharpen,
        "depth_schedule": depth_schedule,
    })
}

pub fn summary(report: &RunReport) -> Value {
    json!({
        "schema_version": SCHEMA_VERSION,
        "label": report.label,
        "problem": report.description,
        "config": report.config,
        "status": status_name(report.status),
        "classification": report.classification(),
        "iterations": report.iterations(),
        "final_residual": json_f64(report.final_residual()),
        "max_cond_F": json_f64(report.max_cond()),
        "resolved": resolved(&report.solver),
        "tol": report.solver.tol,
        "max_iters": report.solver.max_iters,
    })
}

pub(crate) fn write_file(path: &Path, contents: &str) -> Result<(), HarnessError> {
    fs::write(path, contents).map_err(|e| HarnessError::io(path, e))
}

pub(crate) fn create_dir(dir: &Path) -> Result<(), HarnessError> {
    fs::create_dir_all(dir).map_err(|e| HarnessError::io(dir, e))
}

pub(crate) fn pretty(value: &Value) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("JSON values always serialize");
    s.push('\n');
    s
}

pub fn residual_series(report: &RunReport) -> Series<'_> {
    Series {
        label: &report.label,
        points: report.records.iter().map(|r| (r.k as f64, r.residual_norm)).collect(),
    }
}

pub fn cond_series(report: &RunReport) -> Series<'_> {
    Series {
        label: &report.label,
        points: report.records.iter().map(|r| (r.k as f64, r.cond_f)).collect(),
    }
}

/// Writes `trace.csv`, `summary.json` and, with `plots`, three SVG charts.
pub fn write_run(report: &RunReport, dir: &Path, plots: bool) -> Result<(), HarnessError> {
    create_dir(dir)?;
    write_file(&dir.join(TRACE_FILE), &trace_csv(&report.records))?;
    write_file(&dir.join(SUMMARY_FILE), &pretty(&summary(report)))?;
    if plots {
        let title = format!("{}: {}", report.label, report.description);
        write_file(
            &dir.join("residual.svg"),
            &log_line_plot(&title, "|w_k|", &[residual_series(report)]),
        )?;
        write_file(
            &dir.join("cond.svg"),
            &log_line_plot(&title, "cond_F", &[cond_series(report)]),
        )?;
        let masks: Vec<(usize, &[bool])> =
            report.records.iter().map(|r| (r.k, r.kept_mask.as_slice())).collect();
        write_file(&dir.join("columns.svg"), &column_raster(&title, &masks))?;
    }
    Ok(())
}
