//! Flow configuration, deserialized from a single JSON document.

use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hsurface::{Grid, GridMode};
use crate::symfunc::SpeedFunction;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum Constraint {
    /// Preserve `W_k`, `1 <= k <= n`.
    Quermass { k: usize },
    /// Preserve the enclosed volume `W_0`.
    Volume,
}

impl Constraint {
    /// Index of the preserved quermassintegral.
    pub fn index(&self) -> usize {
        match self {
            Constraint::Quermass { k } => *k,
            Constraint::Volume => 0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SpeedConfig {
    pub name: String,
    pub alpha: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Scheme {
    #[default]
    RadialGraph,
    SupportFunction,
}

/// How the global term is evaluated on radial graphs.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PhiRule {
    /// Ratio of exact directional derivatives of the discrete `W_k`, which
    /// keeps the semi-discrete constraint exact. Support runs fall back to
    /// the quadrature rule.
    #[default]
    Conservative,
    /// Quadrature of the defining ratio of curvature integrals.
    Quadrature,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Monitors {
    /// Allowed dip of `min kappa` below 1 for h-convex runs.
    pub hconvex_tol: f64,
    /// Sphere deviation below which a run counts as converged; 0 disables the stop.
    pub converge_tol: f64,
    /// Relative drift of the preserved quantity treated as an invariant violation.
    pub max_drift: f64,
    pub max_steps: usize,
}

impl Default for Monitors {
    fn default() -> Self {
        Self {
            hconvex_tol: 1e-6,
            converge_tol: 1e-10,
            max_drift: 1e-3,
            max_steps: 50_000_000,
        }
    }
}

fn default_cfl() -> f64 {
    0.4
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FlowConfig {
    pub n: usize,
    pub constraint: Constraint,
    pub speed: SpeedConfig,
    #[serde(default)]
    pub scheme: Scheme,
    /// Grid mode; full circle for n = 1 and axisymmetric otherwise when absent.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mode: Option<GridMode>,
    /// Node count; 256 (full circle) or 129 (axisymmetric) when absent.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub grid: Option<usize>,
    pub t_end: f64,
    #[serde(default = "default_cfl")]
    pub c_cfl: f64,
    /// Output cadence in flow time; 1/100 of `t_end` when absent.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub output_every: Option<f64>,
    #[serde(default)]
    pub renormalize: bool,
    #[serde(default)]
    pub phi_rule: PhiRule,
    #[serde(default)]
    pub monitors: Monitors,
}

impl FlowConfig {
    /// Standard settings for a run preserving `W_k` (k = 0 selects volume).
    pub fn new(n: usize, k: usize, speed: &str, alpha: f64, t_end: f64) -> Self {
        Self {
            n,
            constraint: if k == 0 {
                Constraint::Volume
            } else {
                Constraint::Quermass { k }
            },
            speed: SpeedConfig {
                name: speed.to_string(),
                alpha,
            },
            scheme: Scheme::RadialGraph,
            mode: None,
            grid: None,
            t_end,
            c_cfl: default_cfl(),
            output_every: None,
            renormalize: false,
            phi_rule: PhiRule::Conservative,
            monitors: Monitors::default(),
        }
    }

    /// Parse and validate; errors name the offending field path.
    pub fn from_json(text: &str) -> Result<Self> {
        let de = &mut serde_json::Deserializer::from_str(text);
        let cfg: Self = serde_path_to_error::deserialize(de).map_err(|e| {
            let path = e.path().to_string();
            Error::config(if path == "." { String::new() } else { path }, e.into_inner().to_string())
        })?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn from_value(value: serde_json::Value) -> Result<Self> {
        let cfg: Self = serde_path_to_error::deserialize(value).map_err(|e| {
            let path = e.path().to_string();
            Error::config(if path == "." { String::new() } else { path }, e.into_inner().to_string())
        })?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        if self.n == 0 {
            return Err(Error::config("n", "dimension must be positive"));
        }
        if let Constraint::Quermass { k } = self.constraint {
            if k == 0 || k > self.n {
                return Err(Error::config(
                    "constraint.k",
                    format!("k must satisfy 1 <= k <= n = {}, got {k}", self.n),
                ));
            }
        }
        if !(self.t_end > 0.0 && self.t_end.is_finite()) {
            return Err(Error::config("t_end", "must be positive and finite"));
        }
        if !(self.c_cfl > 0.0 && self.c_cfl <= 1.0) {
            return Err(Error::config("c_cfl", "must lie in (0, 1]"));
        }
        if let Some(dt) = self.output_every {
            if !(dt > 0.0 && dt.is_finite()) {
                return Err(Error::config("output_every", "must be positive"));
            }
        }
        let m = &self.monitors;
        for (name, v) in [("monitors.hconvex_tol", m.hconvex_tol), ("monitors.max_drift", m.max_drift)] {
            if !(v > 0.0) {
                return Err(Error::config(name, "must be positive"));
            }
        }
        if !(m.converge_tol >= 0.0) {
            return Err(Error::config("monitors.converge_tol", "must be nonnegative"));
        }
        self.speed_function()?;
        self.make_grid()?;
        Ok(())
    }

    pub fn speed_function(&self) -> Result<SpeedFunction> {
        let kind = self
            .speed
            .name
            .parse()
            .map_err(|e: Error| Error::config("speed.name", e.to_string()))?;
        SpeedFunction::new(kind, self.n, self.speed.alpha)
    }

    pub fn grid_mode(&self) -> GridMode {
        self.mode.unwrap_or(if self.n == 1 {
            GridMode::FullCircle
        } else {
            GridMode::Axisymmetric
        })
    }

    pub fn make_grid(&self) -> Result<Arc<Grid>> {
        let mode = self.grid_mode();
        let count = self.grid.unwrap_or(match mode {
            GridMode::FullCircle => 256,
            GridMode::Axisymmetric => 129,
        });
        Grid::new(self.n, mode, count).map_err(|e| match e {
            Error::Config { path, message } if path == "grid" || path == "mode" => Error::Config { path, message },
            other => Error::config("grid", other.to_string()),
        })
    }

    pub fn cadence(&self) -> f64 {
        self.output_every.unwrap_or(self.t_end / 100.0)
    }
}
