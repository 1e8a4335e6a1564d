//! Cartesian parameter grid over one base configuration.

use std::path::{Path, PathBuf};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::artifacts::{create_dir, pretty, summary, write_file, write_run, SCHEMA_VERSION};
use crate::config::{sanitize, NumberOr, OrderName, RunConfig, StrategyName};
use crate::error::HarnessError;
use crate::runner::execute;

pub const INDEX_FILE: &str = "index.json";

/// Axes left empty are not swept.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepGrid {
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub strategy: Vec<StrategyName>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub m: Vec<usize>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub cs: Vec<NumberOr>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub kappa: Vec<f64>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub beta: Vec<NumberOr>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub order: Vec<OrderName>,
}

impl SweepGrid {
    /// Appends every axis value that `other` lists.
    pub fn extend(&mut self, other: &SweepGrid) {
        self.strategy.extend(&other.strategy);
        self.m.extend(&other.m);
        self.cs.extend(other.cs.iter().cloned());
        self.kappa.extend(&other.kappa);
        self.beta.extend(other.beta.iter().cloned());
        self.order.extend(&other.order);
    }

    fn is_empty(&self) -> bool {
        self.strategy.is_empty()
            && self.m.is_empty()
            && self.cs.is_empty()
            && self.kappa.is_empty()
            && self.beta.is_empty()
            && self.order.is_empty()
    }

    /// Every grid point as a configuration and its parameter record.
    pub fn points(&self, base: &RunConfig) -> Result<Vec<(RunConfig, Value)>, HarnessError> {
        if self.is_empty() {
            return Err(HarnessError::config("sweep grid is empty: list at least one axis under `grid`"));
        }
        let mut points = vec![(base.clone(), json!({}))];
        macro_rules! axis {
            ($field:ident, $apply:expr) => {
                if !self.$field.is_empty() {
                    points = points
                        .into_iter()
                        .flat_map(|(cfg, params)| {
                            self.$field.iter().map(move |v| {
                                let mut cfg = cfg.clone();
                                let mut params = params.clone();
                                #[allow(clippy::redundant_closure_call)]
                                ($apply)(&mut cfg, v.clone());
                                params[stringify!($field)] = json!(v);
                                (cfg, params)
                            })
                        })
                        .collect();
                }
            };
        }
        axis!(strategy, |c: &mut RunConfig, v| c.solver.strategy = Some(v));
        axis!(m, |c: &mut RunConfig, v| c.solver.m = Some(v));
        axis!(cs, |c: &mut RunConfig, v| c.solver.cs = Some(v));
        axis!(kappa, |c: &mut RunConfig, v| c.solver.kappa = Some(v));
        axis!(beta, |c: &mut RunConfig, v| c.solver.beta = Some(v));
        axis!(order, |c: &mut RunConfig, v| c.solver.order = Some(v));
        for (i, (cfg, params)) in points.iter_mut().enumerate() {
            let tag: Vec<String> = params
                .as_object()
                .into_iter()
                .flatten()
                .map(|(k, v)| format!("{k}={}", v.as_str().map_or_else(|| v.to_string(), str::to_string)))
                .collect();
            cfg.label = Some(format!("{i:03}_{}", tag.join("_")));
            cfg.out = None;
        }
        Ok(points)
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepConfig {
    #[serde(default)]
    pub base: RunConfig,
    #[serde(default)]
    pub grid: SweepGrid,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub out: Option<PathBuf>,
}

/// Runs every grid point; a failing point is recorded in the index and does
/// not stop the sweep. Returns the index.
pub fn run_sweep(points: &[(RunConfig, Value)], out: &Path, plots: bool) -> Result<Value, HarnessError> {
    create_dir(out)?;
    let entries: Vec<Value> = points
        .par_iter()
        .map(|(cfg, params)| {
            let dir_name = sanitize(&cfg.label());
            let outcome = execute(cfg).and_then(|rep| {
                write_run(&rep, &out.join(&dir_name), plots)?;
                Ok(rep)
            });
            match outcome {
                Ok(rep) => json!({
                    "label": rep.label,
                    "params": params,
                    "dir": dir_name,
                    "summary": summary(&rep),
                }),
                Err(e) => json!({
                    "label": cfg.label(),
                    "params": params,
                    "error": e.to_string(),
                    "exit_code": e.exit_code(),
                }),
            }
        })
        .collect();
    let failed = entries.iter().filter(|e| e.get("error").is_some()).count();
    let index = json!({
        "schema_version": SCHEMA_VERSION,
        "points": entries.len(),
        "failed": failed,
        "runs": entries,
    });
    write_file(&out.join(INDEX_FILE), &pretty(&index))?;
    Ok(index)
}
