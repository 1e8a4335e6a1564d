//! Several strategies on one problem, with overlaid plots.

use std::collections::BTreeSet;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::json;

use crate::artifacts::{
    create_dir, cond_series, json_f64, mask_string, pretty, residual_series, summary, write_file,
    write_run, SCHEMA_VERSION,
};
use crate::config::{sanitize, RunConfig};
use crate::error::HarnessError;
use crate::plot::log_line_plot;
use crate::runner::{execute, status_name, RunReport};

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CompareConfig {
    pub runs: Vec<RunConfig>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub out: Option<PathBuf>,
}

impl CompareConfig {
    /// Applies flag overrides to every run and checks that the runs share one
    /// problem block and have distinct labels.
    pub fn prepare(&self, overrides: &RunConfig) -> Result<Vec<RunConfig>, HarnessError> {
        if self.runs.len() < 2 {
            return Err(HarnessError::config("key `runs` needs at least two entries"));
        }
        let mut runs = self.runs.clone();
        for run in &mut runs {
            run.overlay(overrides);
            run.out = None;
        }
        for (i, run) in runs.iter().enumerate().skip(1) {
            if run.problem != runs[0].problem {
                return Err(HarnessError::config(format!(
                    "key `runs[{i}].problem` differs from `runs[0].problem`"
                )));
            }
        }
        let mut seen = BTreeSet::new();
        for (i, run) in runs.iter().enumerate() {
            if !seen.insert(sanitize(&run.label())) {
                return Err(HarnessError::config(format!(
                    "key `runs[{i}].label`: duplicate label {:?}",
                    run.label()
                )));
            }
        }
        runs[0].problem.validate()?;
        Ok(runs)
    }
}

/// Long format: one row per run and iteration.
pub fn combined_csv(reports: &[RunReport]) -> String {
    let mut out = String::from("label,k,residual,theta,cond_F,m_k,cs,beta,kept_mask\n");
    for rep in reports {
        for r in &rep.records {
            let _ = writeln!(
                out,
                "{},{},{:e},{:e},{:e},{},{},{},{}",
                rep.label,
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
    }
    out
}

pub fn summary_table(reports: &[RunReport]) -> String {
    let width = reports.iter().map(|r| r.label.len()).max().unwrap_or(5).max(5);
    let mut out = format!(
        "{:<width$}  {:>10}  {:>12}  {:>10}  {:>10}\n",
        "label", "iterations", "final |w|", "max cond_F", "status"
    );
    for r in reports {
        let _ = writeln!(
            out,
            "{:<width$}  {:>10}  {:>12.3e}  {:>10.2e}  {:>10}",
            r.label,
            r.classification(),
            r.final_residual(),
            r.max_cond(),
            status_name(r.status)
        );
    }
    out
}

/// Runs every entry and writes per-run artifacts under `out/<label>/` plus
/// the combined CSV, summary table, and overlaid plots in `out`.
pub fn run_compare(runs: &[RunConfig], out: &Path, plots: bool) -> Result<Vec<RunReport>, HarnessError> {
    let reports = runs
        .par_iter()
        .map(execute)
        .collect::<Result<Vec<_>, _>>()?;
    create_dir(out)?;
    for rep in &reports {
        write_run(rep, &out.join(sanitize(&rep.label)), plots)?;
    }
    write_file(&out.join("combined.csv"), &combined_csv(&reports))?;
    write_file(&out.join("summary.txt"), &summary_table(&reports))?;
    let rows: Vec<_> = reports.iter().map(summary).collect();
    write_file(
        &out.join("compare.json"),
        &pretty(&json!({
            "schema_version": SCHEMA_VERSION,
            "problem": reports[0].description,
            "runs": rows,
            "best_final_residual": json_f64(
                reports.iter().map(RunReport::final_residual).fold(f64::INFINITY, f64::min)
            ),
        })),
    )?;
    if plots {
        let title = format!("comparison: {}", reports[0].description);
        let res: Vec<_> = reports.iter().map(residual_series).collect();
        let cond: Vec<_> = reports.iter().map(cond_series).collect();
        write_file(&out.join("residual.svg"), &log_line_plot(&title, "|w_k|", &res))?;
        write_file(&out.join("cond.svg"), &log_line_plot(&title, "cond_F", &cond))?;
    }
    Ok(reports)
}
