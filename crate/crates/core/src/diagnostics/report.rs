//! Assembly of the per-run diagnostics report.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::diagnostics::appendix::{appendix_checks, AppendixReport};
use crate::diagnostics::rate::{fit_decay, linearized_rate, mode_series, DecayFit};
use crate::diagnostics::reflection::{reflection_s_plus, Axis};
use crate::error::Result;
use crate::flowcore::run::{FlowRun, Termination};
use crate::flowcore::Constraint;
use crate::hsurface::klein::klein_of;
use crate::hsurface::GridMode;
use crate::measures::radii::min_distance_from;
use crate::measures::{af_check, ball_w_inverse, inball};
use crate::symfunc::SpeedKind;

pub const TERMINAL_RADIUS_TOL: f64 = 1e-4;
pub const RATE_TOL: f64 = 0.05;
pub const DRIFT_TOL: f64 = 1e-5;

/// Which of the more expensive analyses to perform.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct AnalysisOptions {
    /// Mode indices whose decay is fitted.
    pub modes: Vec<usize>,
    /// Axis directions (angles) for the reflection series of planar runs.
    pub axes: Vec<f64>,
    pub reflection: bool,
    pub af: bool,
    pub persistence: bool,
}

impl Default for AnalysisOptions {
    fn default() -> Self {
        Self {
            modes: vec![2],
            axes: vec![0.3, 1.9, 4.1],
            reflection: true,
            af: true,
            persistence: true,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TerminalRadius {
    pub fitted: f64,
    pub predicted: f64,
    pub error: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ModeFit {
    pub mode: usize,
    pub predicted_rate: f64,
    pub fit: Option<DecayFit>,
    pub rel_deviation: Option<f64>,
    /// Reason the fit is missing, if it is.
    pub error: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReflectionSeries {
    pub axis_angle: f64,
    pub values: Vec<Option<f64>>,
    /// Largest increase between consecutive samples.
    pub max_increase: f64,
    pub tolerance: f64,
    /// Position along the axis of the final fitted center.
    pub limit: f64,
    pub monotone: bool,
    /// Whether the values stayed constant within tolerance.
    pub constant: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AfSeries {
    pub k: usize,
    pub l: usize,
    pub values: Vec<Option<f64>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Persistence {
    /// Time during which the half inball from each output time stayed inside
    /// (the last entries are censored by the end of the run).
    pub tau: Vec<f64>,
    pub censored: Vec<bool>,
    pub min_uncensored: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DiagnosticsReport {
    pub n: usize,
    pub speed: String,
    pub alpha: f64,
    pub constraint: Constraint,
    pub termination: Option<Termination>,
    pub failure: Option<String>,
    pub t_final: f64,
    pub steps: usize,
    pub rejected: usize,
    pub h_convex: bool,
    pub max_drift: f64,
    pub min_kappa: f64,
    pub max_f: f64,
    pub max_f_bound: f64,
    pub r_inf: TerminalRadius,
    pub sphere_deviation: f64,
    pub times: Vec<f64>,
    pub mode_fits: Vec<ModeFit>,
    pub deviation_fit: Option<DecayFit>,
    pub reflection: Vec<ReflectionSeries>,
    pub jensen_gap: Vec<f64>,
    pub af_gaps: Vec<AfSeries>,
    pub persistence: Option<Persistence>,
    pub appendix: Option<AppendixReport>,
    pub checks: BTreeMap<String, bool>,
}

impl DiagnosticsReport {
    pub fn all_pass(&self) -> bool {
        self.checks.values().all(|&b| b)
    }
}

fn reflection_series(run: &FlowRun, beta: f64) -> ReflectionSeries {
    let axis = Axis::from_angle(beta);
    let g = run.state.grid();
    let diam = 2.0 * run.initial.measures.rho_plus;
    let tol = 2.0 * g.h * g.h * diam;
    let values: Vec<Option<f64>> = run
        .snapshots
        .iter()
        .map(|(_, st)| reflection_s_plus(st, &axis, g.h * g.h).ok())
        .collect();
    let known: Vec<f64> = values.iter().flatten().cloned().collect();
    let max_increase = known.windows(2).map(|w| w[1] - w[0]).fold(f64::NEG_INFINITY, f64::max);
    let max_increase = if known.len() < 2 { 0.0 } else { max_increase };
    let spread = known.iter().cloned().fold(f64::NEG_INFINITY, f64::max)
        - known.iter().cloned().fold(f64::INFINITY, f64::min);
    let c = run.final_output().center;
    let y = klein_of(&c);
    ReflectionSeries {
        axis_angle: beta,
        max_increase,
        tolerance: tol,
        limit: (y[0] * axis.u[0] + y[1] * axis.u[1]).atanh(),
        monotone: known.len() == values.len() && max_increase <= tol,
        constant: spread <= tol,
        values,
    }
}

fn persistence(run: &FlowRun) -> Persistence {
    let snaps = &run.snapshots;
    let balls: Vec<_> = snaps.iter().map(|(_, st)| inball(st)).collect();
    let mut tau = Vec::with_capacity(snaps.len());
    let mut censored = Vec::with_capacity(snaps.len());
    for (i, (t0, _)) in snaps.iter().enumerate() {
        let (c, rho) = &balls[i];
        let exit = snaps[i + 1..]
            .iter()
            .find(|(_, st)| min_distance_from(st, c) < 0.5 * rho)
            .map(|(t, _)| *t);
        match exit {
            Some(t) => {
                tau.push(t - t0);
                censored.push(false);
            }
            None => {
                tau.push(run.t - t0);
                censored.push(true);
            }
        }
    }
    let min_uncensored = tau
        .iter()
        .zip(&censored)
        .filter(|(_, &c)| !c)
        .map(|(t, _)| *t)
        .reduce(f64::min);
    Persistence {
        tau,
        censored,
        min_uncensored,
    }
}

/// Runs every applicable diagnostic over a completed flow.
pub fn analyze(run: &FlowRun, opts: &AnalysisOptions) -> Result<DiagnosticsReport> {
    let cfg = &run.config;
    let n = cfg.n;
    let k = cfg.constraint.index();
    let speed = cfg.speed_function()?;
    let fin = run.final_output();
    let predicted = ball_w_inverse(n, k, run.preserved0)?;
    let r_inf = TerminalRadius {
        fitted: fin.r_fit,
        predicted,
        error: (fin.r_fit - predicted).abs(),
    };
    let max_f = run
        .steps_log
        .iter()
        .map(|s| s.max_f)
        .fold(run.initial.max_f, f64::max);
    let mut checks = BTreeMap::new();
    let finished = matches!(run.termination, Some(Termination::TimeEnd | Termination::Converged));
    checks.insert("completed".to_string(), finished);
    checks.insert("constraint_drift".to_string(), run.max_drift() <= DRIFT_TOL);
    if run.h_convex {
        checks.insert("h_convexity".to_string(), run.min_kappa() - 1.0 >= -1e-6);
        checks.insert("curvature_bound".to_string(), max_f <= run.max_f_bound);
    }

    let times: Vec<f64> = run.snapshots.iter().map(|(t, _)| *t).collect();
    let mut mode_fits = Vec::new();
    for &l in &opts.modes {
        let predicted_rate = linearized_rate(n, cfg.speed.alpha, predicted, l);
        let (ts, amps) = mode_series(&run.snapshots, l);
        let (fit, error) = match fit_decay(&ts, &amps) {
            Ok(f) => (Some(f), None),
            Err(e) => (None, Some(e.to_string())),
        };
        let rel_deviation = fit.as_ref().map(|f| (f.rate - predicted_rate).abs() / predicted_rate);
        mode_fits.push(ModeFit {
            mode: l,
            predicted_rate,
            fit,
            rel_deviation,
            error,
        });
    }
    let dev: Vec<f64> = std::iter::once(&run.initial)
        .chain(&run.outputs)
        .map(|o| o.sphere_dev_linf)
        .collect();
    let dev_t: Vec<f64> = std::iter::once(&run.initial)
        .chain(&run.outputs)
        .map(|o| o.measures.t)
        .collect();
    let deviation_fit = fit_decay(&dev_t, &dev).ok();

    let mut reflection = Vec::new();
    if opts.reflection && run.initial.min_kappa > 0.0 {
        let axes: Vec<f64> = match run.state.grid().mode {
            GridMode::FullCircle => opts.axes.clone(),
            GridMode::Axisymmetric => vec![0.0, std::f64::consts::PI],
        };
        for beta in axes {
            reflection.push(reflection_series(run, beta));
        }
        if run.state.grid().mode == GridMode::FullCircle {
            checks.insert("reflection_monotone".to_string(), reflection.iter().all(|r| r.monotone));
        }
    }

    let jensen_gap: Vec<f64> = run.steps_log.iter().filter_map(|s| s.jensen_gap).collect();

    let mut af_gaps = Vec::new();
    if opts.af && run.h_convex {
        for kk in 1..=n {
            for l in 0..kk {
                let values = run
                    .snapshots
                    .iter()
                    .map(|(_, st)| af_check(st, kk, l).ok())
                    .collect();
                af_gaps.push(AfSeries { k: kk, l, values });
            }
        }
        // the discrete gap carries an O(h^2) error proportional to the deviation from a sphere
        let h2 = run.state.grid().h.powi(2);
        let devs: Vec<f64> = std::iter::once(&run.initial)
            .chain(&run.outputs)
            .map(|o| o.sphere_dev_linf)
            .collect();
        let ok = af_gaps.iter().all(|s| {
            s.values
                .iter()
                .zip(&devs)
                .all(|(g, d)| g.map_or(true, |g| g >= -(1e-8 + h2 * d)))
        });
        checks.insert("alexandrov_fenchel".to_string(), ok);
    }

    let persistence = if opts.persistence && run.h_convex {
        let p = persistence(run);
        checks.insert("inball_persistence".to_string(), p.min_uncensored.map_or(true, |t| t > 0.0));
        Some(p)
    } else {
        None
    };

    let appendix = match (cfg.constraint, &speed.kind) {
        (Constraint::Volume, SpeedKind::ElemSymRoot { .. }) => {
            let a = appendix_checks(run)?;
            checks.insert("appendix".to_string(), a.all_pass());
            Some(a)
        }
        _ => None,
    };
    if finished && run.termination == Some(Termination::Converged) {
        checks.insert("terminal_radius".to_string(), r_inf.error <= TERMINAL_RADIUS_TOL);
    }

    Ok(DiagnosticsReport {
        n,
        speed: speed.name(),
        alpha: cfg.speed.alpha,
        constraint: cfg.constraint,
        termination: run.termination,
        failure: run.failure.as_ref().map(|e| e.to_string()),
        t_final: run.t,
        steps: run.steps,
        rejected: run.rejected,
        h_convex: run.h_convex,
        max_drift: run.max_drift(),
        min_kappa: run.min_kappa(),
        max_f,
        max_f_bound: run.max_f_bound,
        r_inf,
        sphere_deviation: fin.sphere_dev_linf,
        times,
        mode_fits,
        deviation_fit,
        reflection,
        jensen_gap,
        af_gaps,
        persistence,
        appendix,
        checks,
    })
}
