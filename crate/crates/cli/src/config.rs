//! Run configuration: a JSON file, command-line flags, or both (flags win).

use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use faa_core::accelerator::{BetaSchedule, CsSchedule, DepthSchedule, SolverConfig, Strategy};
use faa_core::FilterOrder;
use serde::{Deserialize, Serialize};

use crate::error::HarnessError;

macro_rules! named_enum {
    ($(#[$meta:meta])* $name:ident { $($variant:ident => $text:literal),+ $(,)? }) => {
        $(#[$meta])*
        #[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
        pub enum $name {
            $(#[serde(rename = $text)] $variant),+
        }

        impl $name {
            pub const NAMES: &'static [&'static str] = &[$($text),+];
        }

        impl fmt::Display for $name {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str(match self { $(Self::$variant => $text),+ })
            }
        }

        impl FromStr for $name {
            type Err = String;

            fn from_str(s: &str) -> Result<Self, String> {
                match s {
                    $($text => Ok(Self::$variant),)+
                    other => Err(format!(
                        "unknown value {other:?}, expected one of {}",
                        Self::NAMES.join(", ")
                    )),
                }
            }
        }
    };
}

named_enum!(ProblemName {
    LinearToy => "linear_toy",
    Nlh => "nlh",
    Quasilinear => "quasilinear",
    Plap => "plap",
});

named_enum!(
    /// `none` is unaccelerated damped Picard (depth 0).
    StrategyName {
        None => "none",
        Plain => "plain",
        Faa => "faa",
        Tsvd => "tsvd",
    }
);

named_enum!(OrderName {
    LengthFirst => "length-first",
    AngleFirst => "angle-first",
});

named_enum!(
    /// Coefficient field for complex problems. `real` views `C^n` as `R^{2n}`.
    FieldName {
        Real => "real",
        Complex => "complex",
    }
);

/// A JSON number or a keyword such as `"dynamic"`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum NumberOr {
    Number(f64),
    Text(String),
}

impl NumberOr {
    /// Parses a flag value: numbers become [`NumberOr::Number`].
    pub fn parse(s: &str) -> Self {
        s.parse::<f64>()
            .map_or_else(|_| Self::Text(s.to_string()), Self::Number)
    }
}

impl fmt::Display for NumberOr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Number(x) => write!(f, "{x}"),
            Self::Text(s) => f.write_str(s),
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProblemSpec {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub name: Option<ProblemName>,
    /// linear_toy: dimension.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub n: Option<usize>,
    /// linear_toy: spectral norm of `A`.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub rho: Option<f64>,
    /// linear_toy: generator seed.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub k0: Option<f64>,
    /// nlh: Kerr coefficient.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub eps: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub nodes: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub field: Option<FieldName>,
    /// quasilinear, plap: grid subdivisions per axis.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub subdivisions: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub forcing: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub p: Option<f64>,
    /// plap: regularization.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub eps_reg: Option<f64>,
}

impl ProblemSpec {
    /// Rejects parameters that do not belong to the named problem.
    pub fn validate(&self) -> Result<ProblemName, HarnessError> {
        let name = self
            .name
            .ok_or_else(|| HarnessError::config("missing key `problem.name` (flag --problem)"))?;
        let allowed: &[&str] = match name {
            ProblemName::LinearToy => &["n", "rho", "seed"],
            ProblemName::Nlh => &["k0", "eps", "nodes", "field"],
            ProblemName::Quasilinear => &["subdivisions", "forcing"],
            ProblemName::Plap => &["subdivisions", "forcing", "p", "eps_reg"],
        };
        let present = [
            ("n", self.n.is_some()),
            ("rho", self.rho.is_some()),
            ("seed", self.seed.is_some()),
            ("k0", self.k0.is_some()),
            ("eps", self.eps.is_some()),
            ("nodes", self.nodes.is_some()),
            ("field", self.field.is_some()),
            ("subdivisions", self.subdivisions.is_some()),
            ("forcing", self.forcing.is_some()),
            ("p", self.p.is_some()),
            ("eps_reg", self.eps_reg.is_some()),
        ];
        for (key, set) in present {
            if set && !allowed.contains(&key) {
                return Err(HarnessError::config(format!(
                    "key `problem.{key}` does not apply to problem `{name}`"
                )));
            }
        }
        Ok(name)
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SolverSpec {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub strategy: Option<StrategyName>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub m: Option<usize>,
    /// A number or `"dynamic"`.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub cs: Option<NumberOr>,
    /// Condition cap for FAA; truncation ratio for TSVD.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub kappa: Option<f64>,
    /// A number or `"beta-star"`.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub beta: Option<NumberOr>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub order: Option<OrderName>,
    /// `"constant"` or `"multilevel:tau,m_early,m_late"`.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub depth_schedule: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub sharpen: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub tol: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub max_iters: Option<usize>,
}

impl SolverSpec {
    /// Solver settings with defaults filled in. `beta_star` resolves the
    /// `"beta-star"` keyword.
    pub fn resolve(&self, beta_star: Option<f64>) -> Result<SolverConfig, HarnessError> {
        let defaults = SolverConfig::default();
        let strategy = self.strategy.unwrap_or(StrategyName::Faa);
        let (core_strategy, depth) = match strategy {
            StrategyName::None => (Strategy::PlainAa, 0),
            StrategyName::Plain => (Strategy::PlainAa, self.m.unwrap_or(defaults.depth)),
            StrategyName::Faa => (Strategy::Faa, self.m.unwrap_or(defaults.depth)),
            StrategyName::Tsvd => (Strategy::Tsvd, self.m.unwrap_or(defaults.depth)),
        };
        if strategy == StrategyName::None && self.m.is_some_and(|m| m != 0) {
            return Err(HarnessError::config(
                "key `solver.m` must be 0 or absent with strategy `none`",
            ));
        }

        let cs = match &self.cs {
            None => defaults.cs,
            Some(NumberOr::Number(x)) => CsSchedule::Constant(*x),
            Some(NumberOr::Text(t)) if t == "dynamic" => CsSchedule::Dynamic,
            Some(other) => {
                return Err(HarnessError::config(format!(
                    "key `solver.cs`: expected a number or \"dynamic\", got {other:?}"
                )))
            }
        };
        let beta = match &self.beta {
            None => 1.0,
            Some(NumberOr::Number(x)) => *x,
            Some(NumberOr::Text(t)) if t == "beta-star" => beta_star.ok_or_else(|| {
                HarnessError::config("key `solver.beta`: beta-star is not known for this problem")
            })?,
            Some(other) => {
                return Err(HarnessError::config(format!(
                    "key `solver.beta`: expected a number or \"beta-star\", got {other:?}"
                )))
            }
        };
        let depth_schedule = match self.depth_schedule.as_deref() {
            None | Some("constant") => DepthSchedule::Constant,
            Some(text) => parse_multilevel(text)?,
        };
        let kappa = self.kappa.unwrap_or(defaults.kappa_bar);
        let config = SolverConfig {
            strategy: core_strategy,
            depth,
            beta: BetaSchedule::Constant(beta),
            cs,
            depth_schedule,
            kappa_bar: kappa,
            tsvd_kappa: Some(kappa),
            order: match self.order.unwrap_or(OrderName::LengthFirst) {
                OrderName::LengthFirst => FilterOrder::LengthThenAngle,
                OrderName::AngleFirst => FilterOrder::AngleThenLength,
            },
            sharpen: self.sharpen.unwrap_or(false),
            tol: self.tol.unwrap_or(defaults.tol),
            max_iters: self.max_iters.unwrap_or(defaults.max_iters),
        };
        config.validate()?;
        Ok(config)
    }
}

fn parse_multilevel(text: &str) -> Result<DepthSchedule, HarnessError> {
    let bad = || {
        HarnessError::config(format!(
            "key `solver.depth_schedule`: expected \"constant\" or \"multilevel:tau,m1,m2\", got {text:?}"
        ))
    };
    let body = text.strip_prefix("multilevel:").ok_or_else(bad)?;
    let parts: Vec<&str> = body.split(',').map(str::trim).collect();
    let [tau, m_early, m_late] = parts.as_slice() else {
        return Err(bad());
    };
    Ok(DepthSchedule::Multilevel {
        tau: tau.parse().map_err(|_| bad())?,
        m_early: m_early.parse().map_err(|_| bad())?,
        m_late: m_late.parse().map_err(|_| bad())?,
    })
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    #[serde(default)]
    pub problem: ProblemSpec,
    #[serde(default)]
    pub solver: SolverSpec,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub out: Option<PathBuf>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub label: Option<String>,
}

impl RunConfig {
    pub fn from_json(text: &str) -> Result<Self, HarnessError> {
        serde_json::from_str(text).map_err(|e| HarnessError::config(e.to_string()))
    }

    /// Label for directories and reports; derived from the settings when unset.
    pub fn label(&self) -> String {
        if let Some(label) = &self.label {
            return label.clone();
        }
        let s = &self.solver;
        let mut parts = vec![
            self.problem
                .name
                .map_or_else(|| "problem".to_string(), |n| n.to_string()),
            s.strategy.unwrap_or(StrategyName::Faa).to_string(),
        ];
        if let Some(m) = s.m {
            parts.push(format!("m{m}"));
        }
        if let Some(cs) = &s.cs {
            parts.push(format!("cs{cs}"));
        }
        if let Some(k) = s.kappa {
            parts.push(format!("kappa{k:e}"));
        }
        if let Some(b) = &s.beta {
            parts.push(format!("beta{b}"));
        }
        if let Some(o) = s.order {
            parts.push(o.to_string());
        }
        parts.join("_")
    }

    pub fn out_dir(&self) -> PathBuf {
        self.out
            .clone()
            .unwrap_or_else(|| Path::new("faa-out").join(sanitize(&self.label())))
    }
}

macro_rules! overlay_fields {
    ($dst:expr, $src:expr, $($field:ident),+) => {
        $(if $src.$field.is_some() {
            $dst.$field = $src.$field.clone();
        })+
    };
}

impl ProblemSpec {
    /// Replaces every field that `other` sets.
    pub fn overlay(&mut self, other: &ProblemSpec) {
        overlay_fields!(self, other, name, n, rho, seed, k0, eps, nodes, field, subdivisions, forcing, p, eps_reg);
    }
}

impl SolverSpec {
    /// Replaces every field that `other` sets.
    pub fn overlay(&mut self, other: &SolverSpec) {
        overlay_fields!(self, other, strategy, m, cs, kappa, beta, order, depth_schedule, sharpen, tol, max_iters);
    }
}

impl RunConfig {
    /// Replaces every field that `other` sets; used for flag overrides.
    pub fn overlay(&mut self, other: &RunConfig) {
        self.problem.overlay(&other.problem);
        self.solver.overlay(&other.solver);
        overlay_fields!(self, other, out, label);
    }
}

/// Keeps labels usable as directory names.
pub fn sanitize(label: &str) -> String {
    label
        .chars()
        .map(|c| {
            if c.is_ascii_alphanumeric() || "-_.+".contains(c) {
                c
            } else {
                '_'
            }
        })
        .collect()
}

pub fn read_json<T: serde::de::DeserializeOwned>(path: &Path) -> Result<T, HarnessError> {
    let text = std::fs::read_to_string(path).map_err(|e| HarnessError::io(path, e))?;
    serde_json::from_str(&text)
        .map_err(|e| HarnessError::config(format!("{}: {e}", path.display())))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unknown_keys_are_rejected_by_name() {
        let err = RunConfig::from_json(r#"{"problem": {"name": "nlh"}, "solver": {"kapa": 1}}"#)
            .unwrap_err()
            .to_string();
        assert!(err.contains("kapa"), "{err}");
    }

    #[test]
    fn parameters_must_match_problem() {
        let cfg = RunConfig::from_json(r#"{"problem": {"name": "quasilinear", "k0": 8}}"#).unwrap();
        let err = cfg.problem.validate().unwrap_err().to_string();
        assert!(err.contains("problem.k0"), "{err}");
    }

    #[test]
    fn keywords_resolve() {
        let spec = SolverSpec {
            cs: Some(NumberOr::Text("dynamic".into())),
            beta: Some(NumberOr::Text("beta-star".into())),
            depth_schedule: Some("multilevel:1e-3,5,10".into()),
            ..Default::default()
        };
        let cfg = spec.resolve(Some(0.25)).unwrap();
        assert_eq!(cfg.cs, CsSchedule::Dynamic);
        assert_eq!(cfg.beta, BetaSchedule::Constant(0.25));
        assert_eq!(
            cfg.depth_schedule,
            DepthSchedule::Multilevel {
                tau: 1e-3,
                m_early: 5,
                m_late: 10
            }
        );
        assert!(spec.resolve(None).is_err());
    }

    #[test]
    fn bad_values_name_their_key() {
        for (spec, key) in [
            (
                SolverSpec {
                    cs: Some(NumberOr::Text("fast".into())),
                    ..Default::default()
                },
                "solver.cs",
            ),
            (
                SolverSpec {
                    depth_schedule: Some("multilevel:1,2".into()),
                    ..Default::default()
                },
                "solver.depth_schedule",
            ),
        ] {
            let err = spec.resolve(None).unwrap_err().to_string();
            assert!(err.contains(key), "{err}");
        }
    }

    #[test]
    fn none_strategy_is_depth_zero_picard() {
        let spec = SolverSpec {
            strategy: Some(StrategyName::None),
            ..Default::default()
        };
        let cfg = spec.resolve(None).unwrap();
        assert_eq!((cfg.strategy, cfg.depth), (Strategy::PlainAa, 0));
    }

    #[test]
    fn overlay_keeps_unset_fields() {
        let mut base = RunConfig::from_json(
            r#"{"problem": {"name": "nlh", "nodes": 401}, "solver": {"m": 20, "cs": 0.2}}"#,
        )
        .unwrap();
        let flags = RunConfig {
            solver: SolverSpec {
                cs: Some(NumberOr::Number(0.4)),
                ..Default::default()
            },
            ..Default::default()
        };
        base.overlay(&flags);
        assert_eq!(base.problem.nodes, Some(401));
        assert_eq!(base.solver.m, Some(20));
        assert_eq!(base.solver.cs, Some(NumberOr::Number(0.4)));
    }

    #[test]
    fn number_or_parses_flags() {
        assert_eq!(NumberOr::parse("0.4"), NumberOr::Number(0.4));
        assert_eq!(NumberOr::parse("dynamic"), NumberOr::Text("dynamic".into()));
    }
}
