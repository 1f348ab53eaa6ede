//! Alexandrov reflection: the quantity `S_gamma^+` of a profile curve.

use crate::error::{Error, Result};
use crate::hsurface::grid::GridMode;
use crate::hsurface::klein::{klein_of, minkowski, Lorentz};
use crate::hsurface::{RadialGraphState, SurfaceState};
use crate::measures::boundary_points;

/// A geodesic through the model center, `gamma(s) = cosh s e0 + sinh s (0, u)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Axis {
    pub u: [f64; 2],
}

impl Axis {
    pub fn from_angle(beta: f64) -> Self {
        Self {
            u: [beta.cos(), beta.sin()],
        }
    }

    pub fn point(&self, s: f64) -> Lorentz {
        [s.cosh(), s.sinh() * self.u[0], s.sinh() * self.u[1]]
    }

    /// Unit normal of the hyperplane orthogonal to the axis at `gamma(s)`.
    pub fn normal(&self, s: f64) -> Lorentz {
        [s.sinh(), s.cosh() * self.u[0], s.cosh() * self.u[1]]
    }

    pub fn reflect(&self, s: f64, x: &Lorentz) -> Lorentz {
        let w = self.normal(s);
        let c = 2.0 * minkowski(x, &w);
        [x[0] - c * w[0], x[1] - c * w[1], x[2] - c * w[2]]
    }
}

/// Klein polygon of a radial graph with O(1) edge lookup by polar angle.
struct Polygon<'a> {
    state: &'a RadialGraphState,
    pts: Vec<[f64; 2]>,
}

impl<'a> Polygon<'a> {
    fn new(state: &'a RadialGraphState) -> Self {
        let pts = state
            .grid
            .nodes
            .iter()
            .zip(&state.r)
            .map(|(&t, &r)| [r.tanh() * t.cos(), r.tanh() * t.sin()])
            .collect();
        Self { state, pts }
    }

    /// Signed distance outside the edge seen from the origin in the direction of `p`.
    fn excess(&self, p: [f64; 2]) -> f64 {
        let g = &self.state.grid;
        let m = self.pts.len();
        let (a, b) = match g.mode {
            GridMode::FullCircle => {
                let ang = p[1].atan2(p[0]).rem_euclid(2.0 * std::f64::consts::PI);
                let j = ((ang / g.h) as usize).min(m - 1);
                (self.pts[j], self.pts[(j + 1) % m])
            }
            GridMode::Axisymmetric => {
                // profiles are symmetric about the axis
                let ang = p[1].abs().atan2(p[0]);
                let j = ((ang / g.h) as usize).min(m - 2);
                let fold = |q: [f64; 2]| [q[0], q[1].abs()];
                (fold(self.pts[j]), fold(self.pts[j + 1]))
            }
        };
        let p = if g.mode == GridMode::Axisymmetric { [p[0], p[1].abs()] } else { p };
        // outward normal of the counter-clockwise edge a -> b
        let e = [b[0] - a[0], b[1] - a[1]];
        let len = e[0].hypot(e[1]);
        let nrm = [e[1] / len, -e[0] / len];
        (p[0] - a[0]) * nrm[0] + (p[1] - a[1]) * nrm[1]
    }
}

/// Whether the reflection of the cap beyond the hyperplane at `s` lies in the body.
fn reflected_cap_inside(poly: &Polygon, pts: &[Lorentz], axis: &Axis, s: f64, tol: f64) -> bool {
    let w = axis.normal(s);
    pts.iter()
        .filter(|x| minkowski(x, &w) > 0.0)
        .all(|x| poly.excess(klein_of(&axis.reflect(s, x))) <= tol)
}

/// `S_gamma^+ = inf { s : R_s(Omega^+(s)) lies in Omega^-(s) }` by bisection,
/// with containment tested against the Klein polygon to tolerance `tol`.
pub fn reflection_s_plus(state: &SurfaceState, axis: &Axis, tol: f64) -> Result<f64> {
    let graph = state.to_graph()?;
    if graph.grid.mode == GridMode::Axisymmetric && axis.u[1].abs() > 1e-12 {
        return Err(Error::ModeMismatch("axisymmetric profiles admit only the symmetry axis".into()));
    }
    let field = graph.geometry()?;
    if field.min_kappa() <= 0.0 {
        return Err(Error::NotConvex("reflection requires a convex body".into()));
    }
    let pts = boundary_points(&SurfaceState::Graph(graph.clone()));
    let poly = Polygon::new(&graph);
    let axial: Vec<f64> = pts
        .iter()
        .map(|x| {
            let y = klein_of(x);
            (y[0] * axis.u[0] + y[1] * axis.u[1]).atanh()
        })
        .collect();
    let mut lo = axial.iter().cloned().fold(f64::INFINITY, f64::min);
    let mut hi = axial.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let holds = |s: f64| reflected_cap_inside(&poly, &pts, axis, s, tol);
    if !holds(hi) || holds(lo) {
        return Err(Error::BisectionFail(format!("no sign change of the containment test on [{lo}, {hi}]")));
    }
    while hi - lo > 1e-12 {
        let mid = 0.5 * (lo + hi);
        if holds(mid) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok(hi)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hsurface::shapes::shifted;
    use crate::hsurface::{Grid, GridMode};

    #[test]
    fn centered_circle_has_zero_s_plus() {
        let grid = Grid::new(1, GridMode::FullCircle, 128).unwrap();
        let st = RadialGraphState::sphere(grid.clone(), 0.8).unwrap().into();
        let s = reflection_s_plus(&st, &Axis::from_angle(0.4), grid.h * grid.h).unwrap();
        // the containment tolerance biases the estimate low by at most about h^2
        assert!(s.abs() < grid.h * grid.h, "{s}");
    }

    #[test]
    fn shifted_circle_reports_its_center() {
        let grid = Grid::new(1, GridMode::FullCircle, 256).unwrap();
        let st = shifted(grid.clone(), 0.3, |_| 0.8).unwrap().into();
        let s = reflection_s_plus(&st, &Axis::from_angle(0.0), grid.h * grid.h).unwrap();
        assert!((s - 0.3).abs() < 2.0 * grid.h * grid.h, "{s}");
        let s = reflection_s_plus(&st, &Axis::from_angle(std::f64::consts::PI), grid.h * grid.h).unwrap();
        assert!((s + 0.3).abs() < 2.0 * grid.h * grid.h, "{s}");
    }
}
