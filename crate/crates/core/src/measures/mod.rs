//! Geometric functionals: area, volume, curvature integrals, quermassintegrals,
//! ball functions and inner/outer radii.

pub mod ball;
pub mod radii;

use serde::{Deserialize, Serialize};

pub use ball::{ball_w, ball_w_derivative, ball_w_inverse};
pub use radii::{boundary_points, inball, radii, Radii};

use crate::error::{Error, Result};
use crate::hsurface::grid::Grid;
use crate::hsurface::radial::{node_geometry_at, sinh_power_integral_t};
use crate::hsurface::{CurvatureField, SurfaceState};
use crate::real::Real;
use crate::symfunc::elementary::mean_curvatures;

/// Principal curvatures may dip this far below 1 before a body stops
/// counting as h-convex.
pub const HCONVEX_TOL: f64 = 1e-6;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MeasureSet {
    pub t: f64,
    pub area: f64,
    pub volume: f64,
    /// `V[k] = V_{n-k} = int E_k dmu` for `k = 0..=n`.
    #[serde(rename = "V")]
    pub v: Vec<f64>,
    /// `W_0..W_{n+1}`.
    #[serde(rename = "W")]
    pub w: Vec<f64>,
    pub rho_minus: f64,
    pub rho_plus: f64,
}

/// `int E_k dmu` for `k = 0..=kmax` from a curvature field.
pub fn curvature_integrals(grid: &Grid, field: &CurvatureField, kmax: usize) -> Vec<f64> {
    let mut out = vec![0.0; kmax + 1];
    let mut e = vec![0.0; kmax + 1];
    for j in 0..field.len() {
        mean_curvatures(field.kappa_at(j), kmax, &mut e);
        let w = grid.weights[j] * field.density[j];
        for (o, ek) in out.iter_mut().zip(&e) {
            *o += w * ek;
        }
    }
    out
}

/// `W_0..W_{len(v)}` from the volume and `v[k] = int E_k dmu`.
pub fn quermass_recursion<T: Real>(n: usize, volume: T, v: &[T]) -> Vec<T> {
    let mut w = Vec::with_capacity(v.len() + 1);
    w.push(volume);
    if let Some(&area) = v.first() {
        w.push(area.scale(1.0 / (n + 1) as f64));
    }
    for j in 1..v.len() {
        let next = v[j].scale(1.0 / (n + 1) as f64) - w[j - 1].scale(j as f64 / (n + 2 - j) as f64);
        w.push(next);
    }
    w
}

/// `W_0..=W_kmax` of a radial graph, written over [`Real`] so that exact
/// directional derivatives are available through dual numbers.
pub(crate) fn graph_quermass<T: Real>(grid: &Grid, r: &[T], kmax: usize) -> Vec<T> {
    let n = grid.n;
    let mut v = vec![T::cst(0.0); kmax];
    let mut volume = T::cst(0.0);
    let mut e = vec![T::cst(0.0); kmax.max(1)];
    let mut kappa = vec![T::cst(0.0); n];
    for j in 0..grid.len() {
        let w = grid.weights[j];
        if kmax > 0 {
            let g = node_geometry_at(grid, r, j);
            kappa[0] = g.k_theta;
            for k in kappa.iter_mut().skip(1) {
                *k = g.k_az;
            }
            mean_curvatures(&kappa, kmax - 1, &mut e);
            for (vk, ek) in v.iter_mut().zip(&e) {
                *vk = *vk + (*ek * g.density).scale(w);
            }
        }
        if kmax != 1 {
            volume = volume + sinh_power_integral_t(n, r[j]).scale(w);
        }
    }
    quermass_recursion(n, volume, &v)
}

/// Area `|M|` and volume `|Omega|`.
pub fn area_and_volume(state: &SurfaceState) -> Result<(f64, f64)> {
    state.area_and_volume()
}

/// `V_{n-k} = int E_k dmu`.
pub fn curvature_integral(state: &SurfaceState, k: usize) -> Result<f64> {
    if k > state.n() {
        return Err(Error::OutOfRange { value: k as f64 });
    }
    let field = state.geometry()?;
    Ok(curvature_integrals(state.grid(), &field, k)[k])
}

/// Curvature integrals `V[k]` (k = 0..=n) and quermassintegrals `W_0..W_{n+1}`.
pub fn quermass_parts(state: &SurfaceState) -> Result<(f64, f64, Vec<f64>, Vec<f64>)> {
    let n = state.n();
    let field = state.geometry()?;
    let (area, volume) = state.area_and_volume()?;
    let v = curvature_integrals(state.grid(), &field, n);
    let w = quermass_recursion(n, volume, &v);
    Ok((area, volume, v, w))
}

pub fn quermassintegrals(state: &SurfaceState) -> Result<Vec<f64>> {
    Ok(quermass_parts(state)?.3)
}

pub fn measure_set(state: &SurfaceState, t: f64) -> Result<MeasureSet> {
    let (area, volume, v, w) = quermass_parts(state)?;
    let rd = radii(state)?;
    Ok(MeasureSet {
        t,
        area,
        volume,
        v,
        w,
        rho_minus: rd.rho_minus,
        rho_plus: rd.rho_plus,
    })
}

/// Alexandrov-Fenchel gap `W_k - f_k(f_l^{-1}(W_l))`, nonnegative for h-convex bodies.
pub fn af_check(state: &SurfaceState, k: usize, l: usize) -> Result<f64> {
    let n = state.n();
    if !(l < k && k <= n) {
        return Err(Error::config("k", format!("need 0 <= l < k <= n, got l = {l}, k = {k}, n = {n}")));
    }
    let field = state.geometry()?;
    let min_kappa = field.min_kappa();
    if min_kappa < 1.0 - HCONVEX_TOL {
        return Err(Error::NotHConvex { min_kappa });
    }
    let w = quermassintegrals(state)?;
    let r = ball_w_inverse(n, l, w[l])?;
    Ok(w[k] - ball_w(n, k, r))
}
