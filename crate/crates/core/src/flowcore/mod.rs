//! Time integration of the constrained flow in both parametrizations.

pub mod config;
pub mod run;
pub mod series;

pub use config::{Constraint, FlowConfig, Monitors, PhiRule, Scheme, SpeedConfig};
pub use run::{run, FlowRun, OutputRecord, StepRecord, Termination};

use crate::error::{Error, Result};
use crate::hsurface::{CurvatureField, Grid, RadialGraphState, SupportState, SurfaceState};
use crate::measures::graph_quermass;
use crate::real::Dual2;
use crate::symfunc::elementary::e_k;
use crate::symfunc::SpeedFunction;

/// Global term by quadrature: `int E_k Psi / int E_k` (quermass) or
/// `int Psi / |M|` (volume). `field` must carry speed values.
pub fn phi_from_field(grid: &Grid, field: &CurvatureField, constraint: Constraint) -> Result<f64> {
    let k = constraint.index();
    let (mut num, mut den) = (0.0, 0.0);
    for j in 0..field.len() {
        let ek = if k == 0 { 1.0 } else { e_k(field.kappa_at(j), k) };
        let w = grid.weights[j] * field.density[j] * ek;
        num += w * field.psi[j];
        den += w;
    }
    if !(den > 0.0) {
        return Err(Error::DegenerateDenominator(den));
    }
    Ok(num / den)
}

/// Global term of the given state by quadrature.
pub fn phi(state: &SurfaceState, speed: &SpeedFunction, constraint: Constraint) -> Result<f64> {
    let field = state.curvature(speed)?;
    phi_from_field(state.grid(), &field, constraint)
}

/// Global term making the discrete `W_k` exactly stationary under the
/// semi-discrete radial flow: `(grad W_k . Psi v) / (grad W_k . v)`.
pub fn phi_conservative(state: &RadialGraphState, field: &CurvatureField, constraint: Constraint) -> Result<f64> {
    let k = constraint.index();
    let r: Vec<Dual2> = (0..state.r.len())
        .map(|j| Dual2 {
            re: state.r[j],
            eps: [field.v[j], field.psi[j] * field.v[j]],
        })
        .collect();
    let w = graph_quermass(&state.grid, &r, k)[k];
    let den = w.eps[0];
    if !(den > 0.0) {
        return Err(Error::DegenerateDenominator(den));
    }
    Ok(w.eps[1] / den)
}

/// `dr/dt = (phi - Psi) v`; `field` must carry speed values.
pub fn rhs_radial_from_field(field: &CurvatureField, phi: f64) -> Vec<f64> {
    field.v.iter().zip(&field.psi).map(|(v, psi)| (phi - psi) * v).collect()
}

pub fn rhs_radial(state: &RadialGraphState, speed: &SpeedFunction, phi: f64) -> Result<Vec<f64>> {
    Ok(rhs_radial_from_field(&state.curvature(speed)?, phi))
}

/// `ds/dt = sqrt((1 - s^2 - |grad s|^2)(1 - s^2)) (phi - F_*^{-alpha}(W^{-1}))`.
pub fn rhs_support(state: &SupportState, speed: &SpeedFunction, phi: f64) -> Result<Vec<f64>> {
    let field = state.curvature(speed)?;
    rhs_support_from_field(state, &field, phi)
}

fn rhs_support_from_field(state: &SupportState, field: &CurvatureField, phi: f64) -> Result<Vec<f64>> {
    Ok(state
        .nodes()?
        .iter()
        .zip(&field.psi)
        .map(|(nd, psi)| nd.speed_factor() * (phi - psi))
        .collect())
}

/// A state together with everything one RK stage needs.
#[derive(Debug, Clone)]
pub struct Evaluation {
    pub field: CurvatureField,
    pub phi: f64,
    pub rhs: Vec<f64>,
}

/// Speed, constraint and numerical settings of one flow.
#[derive(Debug, Clone)]
pub struct Flow {
    pub config: FlowConfig,
    pub speed: SpeedFunction,
}

impl Flow {
    pub fn new(config: FlowConfig) -> Result<Self> {
        config.validate()?;
        let speed = config.speed_function()?;
        Ok(Self { config, speed })
    }

    pub fn constraint(&self) -> Constraint {
        self.config.constraint
    }

    pub fn evaluate(&self, state: &SurfaceState) -> Result<Evaluation> {
        let field = state.curvature(&self.speed)?;
        let c = self.config.constraint;
        match state {
            SurfaceState::Graph(g) => {
                let phi = match self.config.phi_rule {
                    PhiRule::Conservative => phi_conservative(g, &field, c)?,
                    PhiRule::Quadrature => phi_from_field(&g.grid, &field, c)?,
                };
                let rhs = rhs_radial_from_field(&field, phi);
                Ok(Evaluation { field, phi, rhs })
            }
            SurfaceState::Support(s) => {
                let phi = phi_from_field(&s.grid, &field, c)?;
                let rhs = rhs_support_from_field(s, &field, phi)?;
                Ok(Evaluation { field, phi, rhs })
            }
        }
    }

    /// Largest effective diffusion coefficient of the scheme at this state.
    pub fn diffusion_bound(&self, state: &SurfaceState, eval: &Evaluation) -> Result<f64> {
        let n = state.n();
        let mut d_max: f64 = 0.0;
        match state {
            SurfaceState::Graph(g) => {
                for j in 0..g.r.len() {
                    let (_, dpsi) = self.speed.psi_and_dpsi(eval.field.kappa_at(j))?;
                    d_max = d_max.max(dpsi.iter().sum::<f64>() / g.r[j].sinh().powi(2));
                }
            }
            SurfaceState::Support(s) => {
                for (j, nd) in s.nodes()?.iter().enumerate() {
                    let kappa = eval.field.kappa_at(j);
                    let (_, dpsi) = self.speed.psi_and_dpsi(kappa)?;
                    let geom = (1.0 - nd.s * nd.s).powi(2) / nd.gap;
                    let sum: f64 = (0..n).map(|i| dpsi[i] * kappa[i] * kappa[i]).sum();
                    d_max = d_max.max(sum * geom);
                }
            }
        }
        Ok(d_max)
    }

    /// CFL step `c_cfl h^2 / D_max`.
    pub fn stable_dt(&self, state: &SurfaceState, eval: &Evaluation) -> Result<f64> {
        let h = state.grid().h;
        let d = self.diffusion_bound(state, eval)?;
        Ok(if d > 0.0 { self.config.c_cfl * h * h / d } else { f64::INFINITY })
    }

    /// One classical RK4 step with the global term recomputed at every stage.
    pub fn rk4(&self, state: &SurfaceState, first: &Evaluation, dt: f64) -> Result<SurfaceState> {
        let y0 = state.values();
        let stage = |k: &[f64], c: f64| -> Result<SurfaceState> {
            with_values(state, y0.iter().zip(k).map(|(y, k)| y + c * dt * k).collect())
        };
        let k1 = &first.rhs;
        let k2 = self.evaluate(&stage(k1, 0.5)?)?.rhs;
        let k3 = self.evaluate(&stage(&k2, 0.5)?)?.rhs;
        let k4 = self.evaluate(&stage(&k3, 1.0)?)?.rhs;
        let y: Vec<f64> = (0..y0.len())
            .map(|j| y0[j] + dt / 6.0 * (k1[j] + 2.0 * (k2[j] + k3[j]) + k4[j]))
            .collect();
        with_values(state, y)
    }
}

/// Same representation and grid with new nodal values.
pub fn with_values(state: &SurfaceState, values: Vec<f64>) -> Result<SurfaceState> {
    Ok(match state {
        SurfaceState::Graph(g) => {
            let mut next = RadialGraphState::new(g.grid.clone(), values)?;
            next.centerless = g.centerless;
            SurfaceState::Graph(next)
        }
        SurfaceState::Support(s) => SurfaceState::Support(SupportState::new(s.grid.clone(), values)?),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hsurface::{Grid, GridMode};

    fn speed(n: usize, alpha: f64) -> SpeedFunction {
        SpeedFunction::parse("Ek_root(1)", n, alpha).unwrap()
    }

    #[test]
    fn sphere_phi_is_coth_power() {
        let grid = Grid::new(2, GridMode::Axisymmetric, 33).unwrap();
        let st = RadialGraphState::sphere(grid, 0.7).unwrap();
        let field = st.curvature(&speed(2, 2.0)).unwrap();
        let expect = (1.0 / 0.7f64.tanh()).powi(2);
        for c in [Constraint::Volume, Constraint::Quermass { k: 1 }, Constraint::Quermass { k: 2 }] {
            assert!((phi_from_field(&st.grid, &field, c).unwrap() - expect).abs() < 1e-12);
            assert!((phi_conservative(&st, &field, c).unwrap() - expect).abs() < 1e-12);
        }
        let rhs = rhs_radial(&st, &speed(2, 2.0), expect).unwrap();
        assert!(rhs.iter().all(|x| x.abs() < 1e-12));
    }

    #[test]
    fn forced_contraction_matches_ode() {
        let grid = Grid::new(1, GridMode::FullCircle, 32).unwrap();
        let st = RadialGraphState::sphere(grid, 1.2).unwrap();
        let rhs = rhs_radial(&st, &speed(1, 1.5), 0.0).unwrap();
        let expect = -(1.0 / 1.2f64.tanh()).powf(1.5);
        assert!(rhs.iter().all(|x| (x - expect).abs() < 1e-13));
    }

    #[test]
    fn conservative_phi_equals_quadrature_in_volume_mode() {
        let grid = Grid::new(2, GridMode::Axisymmetric, 65).unwrap();
        let st = RadialGraphState::from_fn(grid, |t| 1.0 + 0.1 * t.cos().powi(2)).unwrap();
        let field = st.curvature(&speed(2, 1.0)).unwrap();
        let a = phi_from_field(&st.grid, &field, Constraint::Volume).unwrap();
        let b = phi_conservative(&st, &field, Constraint::Volume).unwrap();
        assert!((a - b).abs() < 1e-13);
    }

    #[test]
    fn support_sphere_is_stationary() {
        let grid = Grid::new(1, GridMode::FullCircle, 32).unwrap();
        let st = SupportState::sphere(grid, 0.9).unwrap();
        let sp = speed(1, 2.0);
        let phi = (1.0 / 0.9f64.tanh()).powi(2);
        let rhs = rhs_support(&st, &sp, phi).unwrap();
        assert!(rhs.iter().all(|x| x.abs() < 1e-12));
        let psi = st.curvature(&sp).unwrap().psi;
        assert!(psi.iter().all(|p| (p - phi).abs() < 1e-12));
    }
}
