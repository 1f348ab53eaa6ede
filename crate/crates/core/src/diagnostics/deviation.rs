//! Distance of a body from its limiting geodesic sphere.

use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::hsurface::grid::GridMode;
use crate::hsurface::klein::{distance, Lorentz};
use crate::hsurface::SurfaceState;
use crate::measures::radii::{lift, on_axis};
use crate::measures::{ball_w_inverse, boundary_points, inball, quermassintegrals};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SphereDeviation {
    pub linf: f64,
    pub l2: f64,
    /// Radius of the ball with the same preserved quermassintegral.
    pub r_star: f64,
    /// Weighted mean distance from the fitted center.
    pub r_fit: f64,
    pub center: Lorentz,
    /// Distances from the fitted center to the boundary samples.
    pub distances: Vec<f64>,
}

/// Center coordinates: axis offset (axisymmetric) or hyperboloid `(x1, x2)`.
fn coords(mode: GridMode, c: &Lorentz) -> Vec<f64> {
    match mode {
        GridMode::Axisymmetric => vec![c[1].asinh()],
        GridMode::FullCircle => vec![c[1], c[2]],
    }
}

fn center_of(mode: GridMode, x: &[f64]) -> Lorentz {
    match mode {
        GridMode::Axisymmetric => on_axis(x[0]),
        GridMode::FullCircle => lift(x[0], x[1]),
    }
}

/// Distances and their gradients with respect to the center coordinates.
fn distance_jet(mode: GridMode, pts: &[Lorentz], x: &[f64]) -> (Vec<f64>, Vec<Vec<f64>>) {
    let c = center_of(mode, x);
    let mut d = Vec::with_capacity(pts.len());
    let mut g = Vec::with_capacity(pts.len());
    for p in pts {
        let dj = distance(p, &c);
        let sh = dj.sinh().max(1e-300);
        let grad = match mode {
            GridMode::Axisymmetric => vec![(p[0] * x[0].sinh() - p[1] * x[0].cosh()) / sh],
            GridMode::FullCircle => vec![(p[0] * x[0] / c[0] - p[1]) / sh, (p[0] * x[1] / c[0] - p[2]) / sh],
        };
        d.push(dj);
        g.push(grad);
    }
    (d, g)
}

/// Center minimizing the weighted variance of the boundary distances,
/// refined from `seed` by Gauss-Newton.
pub fn fit_center(state: &SurfaceState, seed: &Lorentz) -> Lorentz {
    let mode = state.grid().mode;
    let pts = boundary_points(state);
    let w = &state.grid().weights;
    let wsum: f64 = w.iter().sum();
    let mut x = coords(mode, seed);
    let dim = x.len();
    for _ in 0..30 {
        let (d, g) = distance_jet(mode, &pts, &x);
        let dbar: f64 = d.iter().zip(w).map(|(d, w)| d * w).sum::<f64>() / wsum;
        let gbar: Vec<f64> = (0..dim)
            .map(|a| g.iter().zip(w).map(|(g, w)| g[a] * w).sum::<f64>() / wsum)
            .collect();
        let mut jtj = [[0.0; 2]; 2];
        let mut jte = [0.0; 2];
        for j in 0..pts.len() {
            let e = d[j] - dbar;
            for a in 0..dim {
                let ja = g[j][a] - gbar[a];
                jte[a] += w[j] * ja * e;
                for b in 0..dim {
                    jtj[a][b] += w[j] * ja * (g[j][b] - gbar[b]);
                }
            }
        }
        let step: Vec<f64> = if dim == 1 {
            vec![-jte[0] / jtj[0][0]]
        } else {
            let det = jtj[0][0] * jtj[1][1] - jtj[0][1] * jtj[1][0];
            vec![
                -(jtj[1][1] * jte[0] - jtj[0][1] * jte[1]) / det,
                -(jtj[0][0] * jte[1] - jtj[1][0] * jte[0]) / det,
            ]
        };
        if step.iter().any(|s| !s.is_finite()) {
            break;
        }
        let size = step.iter().map(|s| s.abs()).fold(0.0, f64::max);
        for (xa, s) in x.iter_mut().zip(&step) {
            *xa += s;
        }
        if size < 1e-15 {
            break;
        }
    }
    center_of(mode, &x)
}

/// Deviation from the geodesic sphere of radius `ball_W_inverse(k, W_k)`,
/// measured from the fitted center.
pub fn sphere_deviation(state: &SurfaceState, k: usize) -> Result<SphereDeviation> {
    let n = state.n();
    let w = quermassintegrals(state)?;
    let r_star = ball_w_inverse(n, k, w[k])?;
    let (seed, _) = inball(state);
    let center = fit_center(state, &seed);
    Ok(deviation_about(state, &center, r_star))
}

/// Deviation of the boundary distances from `r_star` about a given center.
pub fn deviation_about(state: &SurfaceState, center: &Lorentz, r_star: f64) -> SphereDeviation {
    let pts = boundary_points(state);
    let weights = &state.grid().weights;
    let wsum: f64 = weights.iter().sum();
    let distances: Vec<f64> = pts.iter().map(|p| distance(p, center)).collect();
    let linf = distances.iter().map(|d| (d - r_star).abs()).fold(0.0, f64::max);
    let l2 = (distances
        .iter()
        .zip(weights)
        .map(|(d, w)| w * (d - r_star).powi(2))
        .sum::<f64>()
        / wsum)
        .sqrt();
    let r_fit = distances.iter().zip(weights).map(|(d, w)| d * w).sum::<f64>() / wsum;
    SphereDeviation {
        linf,
        l2,
        r_star,
        r_fit,
        center: *center,
        distances,
    }
}
