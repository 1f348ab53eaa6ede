//! Hyperboloid and Klein-ball models of the meridian plane.
//!
//! Radial graphs and zonal profiles both live in a two-dimensional plane
//! through the model center, so points are carried as Lorentzian 3-vectors
//! `(x0, x1, x2)` with `-x0^2 + x1^2 + x2^2 = -1`.

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::hsurface::grid::{Grid, GridMode};
use crate::hsurface::radial::RadialGraphState;

pub type Lorentz = [f64; 3];

pub fn minkowski(a: &Lorentz, b: &Lorentz) -> f64 {
    -a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

/// Hyperbolic distance between two points of the hyperboloid.
pub fn distance(a: &Lorentz, b: &Lorentz) -> f64 {
    (-minkowski(a, b)).max(1.0).acosh()
}

/// Point at geodesic distance `r` from the model center in direction `theta`.
pub fn hyperboloid_point(r: f64, theta: f64) -> Lorentz {
    let s = r.sinh();
    [r.cosh(), s * theta.cos(), s * theta.sin()]
}

pub fn klein_of(x: &Lorentz) -> [f64; 2] {
    [x[1] / x[0], x[2] / x[0]]
}

pub fn hyperboloid_of(y: &[f64; 2]) -> Lorentz {
    let g = 1.0 / (1.0 - y[0] * y[0] - y[1] * y[1]).sqrt();
    [g, g * y[0], g * y[1]]
}

/// Boundary samples in the Klein ball with Euclidean outward unit normals.
#[derive(Debug, Clone, PartialEq)]
pub struct KleinSamples {
    pub points: Vec<[f64; 2]>,
    pub normals: Vec<[f64; 2]>,
}

/// `Y(theta)` and its first two derivatives for a radial profile.
pub(crate) fn klein_jets(r: f64, p: f64, q: f64, theta: f64) -> ([f64; 2], [f64; 2], [f64; 2]) {
    let (er, et) = ([theta.cos(), theta.sin()], [-theta.sin(), theta.cos()]);
    let t = r.tanh();
    let sech2 = 1.0 - t * t;
    let a1 = sech2 * p;
    let a2 = sech2 * q - 2.0 * sech2 * t * p * p - t;
    let b2 = 2.0 * sech2 * p;
    let y = [t * er[0], t * er[1]];
    let d1 = [a1 * er[0] + t * et[0], a1 * er[1] + t * et[1]];
    let d2 = [a2 * er[0] + b2 * et[0], a2 * er[1] + b2 * et[1]];
    (y, d1, d2)
}

pub fn to_klein(state: &RadialGraphState) -> KleinSamples {
    let g = &*state.grid;
    let mut out = KleinSamples {
        points: Vec::with_capacity(g.len()),
        normals: Vec::with_capacity(g.len()),
    };
    for j in 0..g.len() {
        let (y, d1, _) = klein_jets(state.r[j], g.d1(&state.r, j), 0.0, g.nodes[j]);
        let len = d1[0].hypot(d1[1]);
        out.points.push(y);
        out.normals.push([d1[1] / len, -d1[0] / len]);
    }
    out
}

/// Rebuild a radial graph from Klein points lying on the grid rays.
pub fn from_klein(grid: Arc<Grid>, points: &[[f64; 2]]) -> Result<RadialGraphState> {
    let mut r = Vec::with_capacity(points.len());
    for (j, y) in points.iter().enumerate() {
        let rho = y[0].hypot(y[1]);
        if rho >= 1.0 {
            return Err(Error::BallEscape { node: j });
        }
        r.push(rho.atanh());
    }
    RadialGraphState::new(grid, r)
}

/// Hyperbolic principal curvatures assembled from the Euclidean second
/// fundamental form of the Klein image, node-major with `n` entries per node.
pub fn curvature_via_klein(state: &RadialGraphState) -> Vec<f64> {
    let g = &*state.grid;
    let n = g.n;
    let mut out = Vec::with_capacity(g.len() * n);
    for j in 0..g.len() {
        let (y, d1, d2) = klein_jets(state.r[j], g.d1(&state.r, j), g.d2(&state.r, j), g.nodes[j]);
        let speed2 = d1[0] * d1[0] + d1[1] * d1[1];
        let len = speed2.sqrt();
        let nrm = [d1[1] / len, -d1[0] / len];
        let yy = y[0] * y[0] + y[1] * y[1];
        let ny = nrm[0] * y[0] + nrm[1] * y[1];
        let factor = ((1.0 - yy) * (1.0 - ny * ny)).sqrt();
        // h^Y along the profile parameter: <Y'', -N> for the outward normal
        let h_y = -(d2[0] * nrm[0] + d2[1] * nrm[1]);
        let yd = y[0] * d1[0] + y[1] * d1[1];
        let g_x = (speed2 + yd * yd / (1.0 - yy)) / (1.0 - yy);
        out.push(h_y / factor / g_x);
        if n > 1 && g.mode == GridMode::Axisymmetric {
            // rotation about the x1 axis: Euclidean azimuthal curvature is
            // the off-axis normal component over the distance to the axis
            let k_az = if g.is_pole(j) {
                h_y / speed2
            } else {
                nrm[1] / y[1]
            };
            let kx = k_az * (1.0 - yy) / factor;
            for _ in 1..n {
                out.push(kx);
            }
        }
    }
    out
}
