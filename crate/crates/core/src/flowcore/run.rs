//! The flow driver: adaptive RK4 stepping, monitors and termination.

use serde::{Deserialize, Serialize};

use crate::diagnostics::deviation::sphere_deviation;
use crate::error::{Error, Result};
use crate::flowcore::{with_values, Evaluation, Flow, FlowConfig, Scheme};
use crate::hsurface::klein::Lorentz;
use crate::hsurface::{support_from_graph, CurvatureField, Grid, SurfaceState};
use crate::measures::{curvature_integrals, graph_quermass, measure_set, quermass_recursion, MeasureSet};
use crate::real::Dual2;
use crate::symfunc::elementary::e_k;
use crate::symfunc::SpeedKind;

/// Smallest step before a run is abandoned.
pub const MIN_DT: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Termination {
    TimeEnd,
    Converged,
    StepCollapse,
    InvariantViolation,
}

/// Cheap monitors recorded after every accepted step.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StepRecord {
    pub t: f64,
    pub dt: f64,
    pub area: f64,
    pub volume: f64,
    /// `W_0..W_{n+1}`.
    pub w: Vec<f64>,
    pub phi: f64,
    pub min_kappa: f64,
    pub max_f: f64,
    pub min_psi: f64,
    pub max_psi: f64,
    /// `int E_k Psi - (1/|M|) int E_k int Psi` for `f = E_k^{1/k}` speeds.
    pub jensen_gap: Option<f64>,
    /// `int (E_k - mean E_k)^2 dmu` for `f = E_k^{1/k}` speeds.
    pub dispersion: Option<f64>,
}

/// Full measures and the sphere deviation at an output time.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OutputRecord {
    pub measures: MeasureSet,
    pub phi: f64,
    pub min_kappa: f64,
    pub max_f: f64,
    pub sphere_dev_linf: f64,
    pub sphere_dev_l2: f64,
    pub r_fit: f64,
    pub center: Lorentz,
}

#[derive(Debug, Clone)]
pub struct FlowRun {
    pub config: FlowConfig,
    pub state: SurfaceState,
    pub t: f64,
    pub steps: usize,
    pub rejected: usize,
    /// Whether the initial body was h-convex; h-convexity monitors are off otherwise.
    pub h_convex: bool,
    /// Value of the preserved quantity at t = 0.
    pub preserved0: f64,
    /// Bound on `max F` asserted along h-convex runs.
    pub max_f_bound: f64,
    pub initial: OutputRecord,
    pub steps_log: Vec<StepRecord>,
    pub outputs: Vec<OutputRecord>,
    pub snapshots: Vec<(f64, SurfaceState)>,
    pub termination: Option<Termination>,
    pub failure: Option<Error>,
}

impl FlowRun {
    pub fn preserved_index(&self) -> usize {
        self.config.constraint.index()
    }

    /// Largest relative drift of the preserved quantity over accepted steps.
    pub fn max_drift(&self) -> f64 {
        let k = self.preserved_index();
        self.steps_log
            .iter()
            .map(|s| ((s.w[k] - self.preserved0) / self.preserved0).abs())
            .fold(0.0, f64::max)
    }

    pub fn min_kappa(&self) -> f64 {
        self.steps_log
            .iter()
            .map(|s| s.min_kappa)
            .fold(self.initial.min_kappa, f64::min)
    }

    pub fn final_output(&self) -> &OutputRecord {
        self.outputs.last().unwrap_or(&self.initial)
    }
}

fn step_record(grid: &Grid, flow: &Flow, state: &SurfaceState, eval: &Evaluation, t: f64, dt: f64) -> Result<StepRecord> {
    let n = grid.n;
    let field = &eval.field;
    let (area, volume) = state.area_and_volume()?;
    let v = curvature_integrals(grid, field, n);
    let w = quermass_recursion(n, volume, &v);
    let (jensen_gap, dispersion) = match flow.speed.kind {
        SpeedKind::ElemSymRoot { k } => {
            let (gap, disp) = jensen_terms(grid, field, k, area);
            (Some(gap), Some(disp))
        }
        _ => (None, None),
    };
    Ok(StepRecord {
        t,
        dt,
        area,
        volume,
        w,
        phi: eval.phi,
        min_kappa: field.min_kappa(),
        max_f: field.max_f(),
        min_psi: field.psi.iter().cloned().fold(f64::INFINITY, f64::min),
        max_psi: field.psi.iter().cloned().fold(f64::NEG_INFINITY, f64::max),
        jensen_gap,
        dispersion,
    })
}

/// Jensen gap and `L^2` dispersion of `E_k`.
pub fn jensen_terms(grid: &Grid, field: &CurvatureField, k: usize, area: f64) -> (f64, f64) {
    let (mut ek_psi, mut ek, mut psi, mut ek2) = (0.0, 0.0, 0.0, 0.0);
    for j in 0..field.len() {
        let w = grid.weights[j] * field.density[j];
        let e = e_k(field.kappa_at(j), k);
        ek_psi += w * e * field.psi[j];
        ek += w * e;
        psi += w * field.psi[j];
        ek2 += w * e * e;
    }
    (ek_psi - ek * psi / area, ek2 - ek * ek / area)
}

fn output_record(flow: &Flow, state: &SurfaceState, eval: &Evaluation, t: f64) -> Result<OutputRecord> {
    let measures = measure_set(state, t)?;
    let dev = sphere_deviation(state, flow.config.constraint.index())?;
    Ok(OutputRecord {
        measures,
        phi: eval.phi,
        min_kappa: eval.field.min_kappa(),
        max_f: eval.field.max_f(),
        sphere_dev_linf: dev.linf,
        sphere_dev_l2: dev.l2,
        r_fit: dev.r_fit,
        center: dev.center,
    })
}

/// Value of the preserved quermassintegral.
fn preserved(state: &SurfaceState, k: usize) -> Result<f64> {
    let n = state.n();
    let field = state.geometry()?;
    let (_, volume) = state.area_and_volume()?;
    let v = curvature_integrals(state.grid(), &field, n);
    Ok(quermass_recursion(n, volume, &v)[k])
}

/// One Newton step for a uniform offset restoring the preserved quantity.
fn renormalize(state: &SurfaceState, k: usize, target: f64) -> Result<SurfaceState> {
    let current = preserved(state, k)?;
    let slope = match state {
        SurfaceState::Graph(g) => {
            let r: Vec<Dual2> = g.r.iter().map(|&r| Dual2 { re: r, eps: [1.0, 0.0] }).collect();
            graph_quermass(&g.grid, &r, k)[k].eps[0]
        }
        SurfaceState::Support(_) => {
            let eps = 1e-7;
            let shifted = with_values(state, state.values().iter().map(|v| v + eps).collect())?;
            (preserved(&shifted, k)? - current) / eps
        }
    };
    let delta = (target - current) / slope;
    with_values(state, state.values().iter().map(|v| v + delta).collect())
}

/// Integrate the flow from `initial` (a radial graph is converted when the
/// support scheme is selected).
pub fn run(config: &FlowConfig, initial: SurfaceState) -> Result<FlowRun> {
    let flow = Flow::new(config.clone())?;
    if initial.n() != config.n {
        return Err(Error::DimensionMismatch {
            expected: config.n,
            got: initial.n(),
        });
    }
    let state = match (config.scheme, initial) {
        (Scheme::SupportFunction, SurfaceState::Graph(g)) => SurfaceState::Support(support_from_graph(&g)?),
        (Scheme::RadialGraph, SurfaceState::Support(s)) => SurfaceState::Graph(
            crate::hsurface::graph_from_support(&s, s.grid.clone())?,
        ),
        (_, st) => st,
    };
    let grid = state.grid().clone();
    let k = config.constraint.index();
    let mon = &config.monitors;
    let eval = flow.evaluate(&state)?;
    let initial_out = output_record(&flow, &state, &eval, 0.0)?;
    let h_convex = eval.field.min_kappa() >= 1.0 - mon.hconvex_tol;
    let rho0 = initial_out.measures.rho_minus;
    let max_f_bound = 2.0 * initial_out.max_f.max(1.0 / (0.5 * rho0).tanh());
    let preserved0 = initial_out.measures.w[k];
    let mut run = FlowRun {
        config: config.clone(),
        state,
        t: 0.0,
        steps: 0,
        rejected: 0,
        h_convex,
        preserved0,
        max_f_bound,
        initial: initial_out.clone(),
        steps_log: Vec::new(),
        outputs: Vec::new(),
        snapshots: Vec::new(),
        termination: None,
        failure: None,
    };
    run.snapshots.push((0.0, run.state.clone()));
    let floor = 1.0 - 10.0 * mon.hconvex_tol;
    let cadence = config.cadence();
    let mut next_index = 1usize;
    let mut eval = eval;
    let t_end = config.t_end;
    let done = |t: f64| t >= t_end * (1.0 - 1e-13);

    while !done(run.t) {
        if run.steps >= mon.max_steps {
            run.termination = Some(Termination::StepCollapse);
            run.failure = Some(Error::StepCollapse { t: run.t, dt: 0.0 });
            return Ok(run);
        }
        let next_out = (next_index as f64 * cadence).min(t_end);
        let mut dt = flow.stable_dt(&run.state, &eval)?.min(next_out - run.t);
        let (next, next_eval) = loop {
            if dt < MIN_DT {
                run.termination = Some(Termination::StepCollapse);
                run.failure = Some(Error::StepCollapse { t: run.t, dt });
                return Ok(run);
            }
            let attempt = flow.rk4(&run.state, &eval, dt).and_then(|s| {
                let e = flow.evaluate(&s)?;
                Ok((s, e))
            });
            match attempt {
                Ok((s, e)) if !run.h_convex || e.field.min_kappa() >= floor => break (s, e),
                _ => {
                    run.rejected += 1;
                    dt *= 0.5;
                }
            }
        };
        let landed = (run.t + dt - next_out).abs() <= 1e-12 * next_out.max(1.0);
        run.t = if landed { next_out } else { run.t + dt };
        run.steps += 1;
        run.state = next;
        eval = next_eval;
        let rec = step_record(&grid, &flow, &run.state, &eval, run.t, dt)?;
        let drift = ((rec.w[k] - run.preserved0) / run.preserved0).abs();
        let blown = run.h_convex && rec.max_f > run.max_f_bound;
        run.steps_log.push(rec);
        if drift > mon.max_drift || blown {
            run.termination = Some(Termination::InvariantViolation);
            run.failure = Some(Error::Invariant(if blown {
                format!("max F exceeded the curvature bound {}", run.max_f_bound)
            } else {
                format!("relative drift {drift:e} of W_{k} exceeds {}", mon.max_drift)
            }));
            return Ok(run);
        }
        if landed {
            next_index += 1;
            if config.renormalize {
                run.state = renormalize(&run.state, k, run.preserved0)?;
                eval = flow.evaluate(&run.state)?;
            }
            let out = output_record(&flow, &run.state, &eval, run.t)?;
            let converged = out.sphere_dev_linf < mon.converge_tol;
            run.outputs.push(out);
            run.snapshots.push((run.t, run.state.clone()));
            if converged {
                run.termination = Some(Termination::Converged);
                return Ok(run);
            }
        }
    }
    run.termination = Some(Termination::TimeEnd);
    Ok(run)
}
