//! Checks for the volume-preserving flow by powers of `E_k^{1/k}`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::flowcore::run::{jensen_terms, FlowRun};
use crate::flowcore::Constraint;
use crate::symfunc::SpeedKind;

pub const MONOTONE_TOL: f64 = 1e-7;
pub const JENSEN_TOL: f64 = 1e-9;
pub const DISPERSION_RATIO: f64 = 1e-8;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AppendixReport {
    pub k: usize,
    /// Largest step-to-step increase of `W_k`, relative to `W_k(0)`.
    pub max_wk_increase: f64,
    pub min_jensen_gap: f64,
    pub dispersion_initial: f64,
    pub dispersion_final: f64,
    pub volume_drift: f64,
    pub wk_monotone: bool,
    pub jensen_nonnegative: bool,
    pub dispersion_decays: bool,
}

impl AppendixReport {
    pub fn all_pass(&self) -> bool {
        self.wk_monotone && self.jensen_nonnegative && self.dispersion_decays
    }
}

pub fn appendix_checks(run: &FlowRun) -> Result<AppendixReport> {
    if run.config.constraint != Constraint::Volume {
        return Err(Error::ModeMismatch("appendix checks need a volume-preserving run".into()));
    }
    let speed = run.config.speed_function()?;
    let k = match speed.kind {
        SpeedKind::ElemSymRoot { k } => k,
        _ => return Err(Error::ModeMismatch(format!("appendix checks need f = E_k^(1/k), got {}", speed.name()))),
    };
    let st0 = &run.snapshots[0].1;
    let field0 = st0.curvature(&speed)?;
    let (gap0, disp0) = jensen_terms(st0.grid(), &field0, k, run.initial.measures.area);

    let w0 = run.initial.measures.w[k];
    let mut prev = w0;
    let mut max_inc = f64::NEG_INFINITY;
    let mut min_gap = gap0;
    for s in &run.steps_log {
        max_inc = max_inc.max((s.w[k] - prev) / w0.abs());
        prev = s.w[k];
        if let Some(g) = s.jensen_gap {
            min_gap = min_gap.min(g);
        }
    }
    let disp_final = run
        .steps_log
        .last()
        .and_then(|s| s.dispersion)
        .unwrap_or(disp0);
    let max_inc = if run.steps_log.is_empty() { 0.0 } else { max_inc };
    Ok(AppendixReport {
        k,
        max_wk_increase: max_inc,
        min_jensen_gap: min_gap,
        dispersion_initial: disp0,
        dispersion_final: disp_final,
        volume_drift: run.max_drift(),
        wk_monotone: max_inc <= MONOTONE_TOL,
        jensen_nonnegative: min_gap >= -JENSEN_TOL,
        dispersion_decays: disp_final <= DISPERSION_RATIO * disp0 || disp0 == 0.0,
    })
}
