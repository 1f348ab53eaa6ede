//! Support functions of Klein-ball images and the conversions to and from
//! radial graphs.

use std::f64::consts::PI;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::hsurface::grid::{Grid, GridMode};
use crate::hsurface::klein::klein_jets;
use crate::hsurface::radial::{sinh_power_integral, CurvatureField, RadialGraphState};
use crate::symfunc::SpeedFunction;

/// Smallest eigenvalue of `tau` accepted as strictly convex.
pub const TAU_FLOOR: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq)]
pub struct SupportState {
    pub grid: Arc<Grid>,
    /// Support values `s(z)` on the grid over the unit sphere.
    pub s: Vec<f64>,
}

/// Derived quantities at one support node.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SupportNode {
    pub s: f64,
    pub ds: f64,
    /// Meridian and azimuthal eigenvalues of `tau`.
    pub tau: [f64; 2],
    /// `1 - s^2 - |grad s|^2`.
    pub gap: f64,
    /// Eigenvalues of the inverse hyperbolic Weingarten map.
    pub w_inv: [f64; 2],
    pub density: f64,
}

impl SupportNode {
    /// Normal speed factor `sqrt((1 - s^2 - |grad s|^2)(1 - s^2))`.
    pub fn speed_factor(&self) -> f64 {
        (self.gap * (1.0 - self.s * self.s)).sqrt()
    }
}

impl SupportState {
    pub fn new(grid: Arc<Grid>, s: Vec<f64>) -> Result<Self> {
        if s.len() != grid.len() {
            return Err(Error::DimensionMismatch {
                expected: grid.len(),
                got: s.len(),
            });
        }
        for j in 0..s.len() {
            let ds = grid.d1(&s, j);
            if !(s[j] * s[j] + ds * ds < 1.0) || !s[j].is_finite() {
                return Err(Error::BallEscape { node: j });
            }
        }
        Ok(Self { grid, s })
    }

    /// Support function of the geodesic sphere of radius `r0` about the center.
    pub fn sphere(grid: Arc<Grid>, r0: f64) -> Result<Self> {
        let s = vec![r0.tanh(); grid.len()];
        Self::new(grid, s)
    }

    pub fn n(&self) -> usize {
        self.grid.n
    }

    pub fn nodes(&self) -> Result<Vec<SupportNode>> {
        let g = &*self.grid;
        let n = g.n;
        let mut out = Vec::with_capacity(g.len());
        for j in 0..g.len() {
            let s = self.s[j];
            let ds = g.d1(&self.s, j);
            let t1 = g.d2(&self.s, j) + s;
            let t2 = if n > 1 { g.azimuthal(&self.s, j) + s } else { t1 };
            for t in [t1, t2] {
                if !(t >= TAU_FLOOR) {
                    return Err(Error::SingularTau { node: j, value: t });
                }
            }
            let gap = 1.0 - s * s - ds * ds;
            if !(gap > 0.0) {
                return Err(Error::BallEscape { node: j });
            }
            let ratio = (1.0 - s * s) / gap;
            let sr = ratio.sqrt();
            let mut density = t1 * (1.0 - s * s).sqrt() / gap;
            if n > 1 {
                density *= (t2 / gap.sqrt()).powi(n as i32 - 1);
            }
            out.push(SupportNode {
                s,
                ds,
                tau: [t1, t2],
                gap,
                w_inv: [t1 * ratio * sr, t2 * sr],
                density,
            });
        }
        Ok(out)
    }

    /// Geometry without speed values; `v` is the radial graph factor of the
    /// same body about the model center.
    pub fn geometry(&self) -> Result<CurvatureField> {
        let n = self.n();
        let nodes = self.nodes()?;
        let mut field = CurvatureField {
            n,
            v: Vec::with_capacity(nodes.len()),
            kappa: Vec::with_capacity(nodes.len() * n),
            density: Vec::with_capacity(nodes.len()),
            f: Vec::new(),
            psi: Vec::new(),
        };
        for nd in &nodes {
            let rho = nd.s.hypot(nd.ds);
            field.v.push(rho * (1.0 - nd.s * nd.s).sqrt() / (nd.s * nd.gap.sqrt()));
            field.kappa.push(1.0 / nd.w_inv[0]);
            for _ in 1..n {
                field.kappa.push(1.0 / nd.w_inv[1]);
            }
            field.density.push(nd.density);
        }
        Ok(field)
    }

    /// Hyperbolic curvatures as reciprocals of the inverse Weingarten eigenvalues.
    pub fn curvature(&self, speed: &SpeedFunction) -> Result<CurvatureField> {
        self.geometry()?.with_speed(speed)
    }

    /// Area from the support density and volume by changing variables to the
    /// polar angle of the boundary point.
    pub fn area_and_volume(&self) -> Result<(f64, f64)> {
        let g = &*self.grid;
        let n = g.n;
        let nodes = self.nodes()?;
        let area = g.integrate(nodes.iter().map(|nd| nd.density));
        let volume = g.integrate(nodes.iter().enumerate().map(|(j, nd)| {
            let rho = nd.s.hypot(nd.ds);
            let beta = nd.ds.atan2(nd.s);
            let dtheta = nd.tau[0] * beta.cos() / rho;
            let mut w = sinh_power_integral(n, rho.atanh()) * dtheta;
            if n > 1 {
                let ratio = if g.is_pole(j) {
                    dtheta
                } else {
                    let psi = g.nodes[j];
                    (psi + beta).sin() / psi.sin()
                };
                w *= ratio.powi(n as i32 - 1);
            }
            w
        }));
        Ok((area, volume))
    }
}

/// Cubic Hermite interpolation through `(xs, ys)` with slopes `ms`; `xs` increasing.
fn hermite_at(xs: &[f64], ys: &[f64], ms: &[f64], x: f64) -> f64 {
    let i = match xs.partition_point(|&v| v <= x) {
        0 => 0,
        k if k >= xs.len() => xs.len() - 2,
        k => k - 1,
    };
    let h = xs[i + 1] - xs[i];
    let t = (x - xs[i]) / h;
    let (t2, t3) = (t * t, t * t * t);
    (2.0 * t3 - 3.0 * t2 + 1.0) * ys[i]
        + (t3 - 2.0 * t2 + t) * h * ms[i]
        + (-2.0 * t3 + 3.0 * t2) * ys[i + 1]
        + (t3 - t2) * h * ms[i + 1]
}

/// Resample `(x_j, y_j, m_j)` samples onto `grid` nodes, wrapping periodically
/// on full-circle grids.
fn resample(grid: &Grid, mut xs: Vec<f64>, mut ys: Vec<f64>, mut ms: Vec<f64>) -> Result<Vec<f64>> {
    if xs.windows(2).any(|w| !(w[1] > w[0])) {
        return Err(Error::NotConvex("parameter is not monotone along the boundary".into()));
    }
    if grid.mode == GridMode::FullCircle {
        let m = xs.len();
        if !(xs[m - 1] - xs[0] < 2.0 * PI) {
            return Err(Error::NotConvex("Gauss map winds more than once".into()));
        }
        let (first, last) = ((xs[0], ys[0], ms[0]), (xs[m - 1], ys[m - 1], ms[m - 1]));
        xs.insert(0, last.0 - 2.0 * PI);
        ys.insert(0, last.1);
        ms.insert(0, last.2);
        xs.push(first.0 + 2.0 * PI);
        ys.push(first.1);
        ms.push(first.2);
        // bring every target into the sampled window
        let lo = xs[0];
        Ok(grid
            .nodes
            .iter()
            .map(|&t| {
                let t = if t < lo { t + 2.0 * PI } else { t };
                let t = if t > xs[xs.len() - 1] { t - 2.0 * PI } else { t };
                hermite_at(&xs, &ys, &ms, t)
            })
            .collect())
    } else {
        Ok(grid.nodes.iter().map(|&t| hermite_at(&xs, &ys, &ms, t)).collect())
    }
}

/// Support function of the Klein image of a radial graph on the same grid.
///
/// Each graph node contributes the exact support value and slope at its own
/// normal direction; these are resampled onto the grid by cubic Hermite
/// interpolation.
pub fn support_from_graph(state: &RadialGraphState) -> Result<SupportState> {
    let g = &*state.grid;
    let field = state.geometry()?;
    if let Some(k) = field.kappa.iter().find(|&&k| !(k > 0.0)) {
        return Err(Error::NotConvex(format!("principal curvature {k} is not positive")));
    }
    let m = g.len();
    let (mut psi, mut s, mut ds) = (Vec::with_capacity(m), Vec::with_capacity(m), Vec::with_capacity(m));
    for j in 0..m {
        let th = g.nodes[j];
        let (y, d1, _) = klein_jets(state.r[j], g.d1(&state.r, j), 0.0, th);
        let len = d1[0].hypot(d1[1]);
        let nrm = [d1[1] / len, -d1[0] / len];
        let (er, et) = ([th.cos(), th.sin()], [-th.sin(), th.cos()]);
        let beta = (nrm[0] * et[0] + nrm[1] * et[1]).atan2(nrm[0] * er[0] + nrm[1] * er[1]);
        let p = th + beta;
        let sv = y[0] * nrm[0] + y[1] * nrm[1];
        if !(sv > 0.0) {
            return Err(Error::NotConvex("model center lies outside the body".into()));
        }
        psi.push(p);
        s.push(sv);
        ds.push(-y[0] * p.sin() + y[1] * p.cos());
    }
    let values = resample(g, psi, s, ds)?;
    SupportState::new(state.grid.clone(), values)
}

/// Radial graph about the model center of the body with the given support
/// function, sampled on `grid`.
pub fn graph_from_support(state: &SupportState, grid: Arc<Grid>) -> Result<RadialGraphState> {
    let g = &*state.grid;
    if grid.n != g.n || grid.mode != g.mode {
        return Err(Error::ModeMismatch("target grid differs in dimension or mode".into()));
    }
    let m = g.len();
    let (mut theta, mut r, mut dr) = (Vec::with_capacity(m), Vec::with_capacity(m), Vec::with_capacity(m));
    for j in 0..m {
        let s = state.s[j];
        let sp = g.d1(&state.s, j);
        let rho = s.hypot(sp);
        if !(rho < 1.0) {
            return Err(Error::BallEscape { node: j });
        }
        if !(s > 0.0) {
            return Err(Error::NotConvex("model center lies outside the body".into()));
        }
        let beta = sp.atan2(s);
        theta.push(g.nodes[j] + beta);
        r.push(rho.atanh());
        dr.push(rho * beta.tan() / (1.0 - rho * rho));
    }
    let values = resample(&grid, theta, r, dr)?;
    RadialGraphState::new(grid, values)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sphere_support_is_constant() {
        let grid = Grid::new(2, GridMode::Axisymmetric, 33).unwrap();
        let st = RadialGraphState::sphere(grid.clone(), 0.9).unwrap();
        let sp = support_from_graph(&st).unwrap();
        for s in &sp.s {
            assert!((s - 0.9f64.tanh()).abs() < 1e-14);
        }
        let f = sp.geometry().unwrap();
        for k in &f.kappa {
            assert!((k - 1.0 / 0.9f64.tanh()).abs() < 1e-10);
        }
        assert!(f.v.iter().all(|v| (v - 1.0).abs() < 1e-12));
    }

    #[test]
    fn ball_escape_is_an_error() {
        let grid = Grid::new(1, GridMode::FullCircle, 16).unwrap();
        assert!(matches!(
            SupportState::new(grid, vec![1.01; 16]),
            Err(Error::BallEscape { .. })
        ));
    }

    #[test]
    fn singular_tau_detected() {
        let grid = Grid::new(1, GridMode::FullCircle, 64).unwrap();
        // s = 0.5 + 0.55 cos 2 psi / 3 gives tau = 0.5 - 0.55 cos 2 psi, negative near psi = 0
        let s: Vec<f64> = grid.nodes.iter().map(|p| 0.5 + 0.55 * (2.0 * p).cos() / 3.0).collect();
        let st = SupportState::new(grid, s).unwrap();
        assert!(matches!(st.nodes(), Err(Error::SingularTau { .. })));
    }

    #[test]
    fn hermite_reproduces_cubics() {
        let xs = [0.0, 0.3, 1.0, 1.7];
        let f = |x: f64| x * x * x - 2.0 * x + 1.0;
        let df = |x: f64| 3.0 * x * x - 2.0;
        let ys: Vec<f64> = xs.iter().map(|&x| f(x)).collect();
        let ms: Vec<f64> = xs.iter().map(|&x| df(x)).collect();
        for x in [0.1, 0.5, 1.2, 1.69] {
            assert!((hermite_at(&xs, &ys, &ms, x) - f(x)).abs() < 1e-13);
        }
    }
}
