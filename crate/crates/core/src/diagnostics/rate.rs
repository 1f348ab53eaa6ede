//! Exponential decay rates: linearized predictions and fits.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hsurface::klein::Lorentz;
use crate::hsurface::{GridMode, SurfaceState};
use crate::diagnostics::deviation::{deviation_about, fit_center};
use crate::quad::zonal_harmonic;

/// Qualifying window of the fitted quantity (linear regime above the noise floor).
pub const WINDOW: (f64, f64) = (1e-9, 1e-3);
pub const MIN_SAMPLES: usize = 20;
pub const MIN_R_SQUARED: f64 = 0.99;

/// Decay rate of the degree-`l` mode of the linearized flow about the
/// geodesic sphere of radius `r_inf`; for n = 1, `l` is the Fourier index.
pub fn linearized_rate(n: usize, alpha: f64, r_inf: f64, l: usize) -> f64 {
    if l < 2 {
        return 0.0;
    }
    let s2 = r_inf.sinh().powi(2);
    let coth = 1.0 / r_inf.tanh();
    let eig = if n == 1 {
        (l * l) as f64
    } else {
        (l * (l + n - 1)) as f64
    };
    alpha * coth.powf(alpha - 1.0) / (n as f64 * s2) * (eig - n as f64)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DecayFit {
    pub rate: f64,
    pub r_squared: f64,
    pub samples: usize,
    pub t_first: f64,
    pub t_last: f64,
    /// False when the regression quality is below `MIN_R_SQUARED`.
    pub reliable: bool,
}

/// Least-squares slope of `log(value)` against `t` over samples in [`WINDOW`].
pub fn fit_decay(times: &[f64], values: &[f64]) -> Result<DecayFit> {
    fit_decay_window(times, values, WINDOW)
}

pub fn fit_decay_window(times: &[f64], values: &[f64], window: (f64, f64)) -> Result<DecayFit> {
    let pts: Vec<(f64, f64)> = times
        .iter()
        .zip(values)
        .filter(|(_, &v)| v >= window.0 && v <= window.1)
        .map(|(&t, &v)| (t, v.ln()))
        .collect();
    if pts.len() < MIN_SAMPLES {
        return Err(Error::InsufficientWindow {
            found: pts.len(),
            needed: MIN_SAMPLES,
        });
    }
    let m = pts.len() as f64;
    let tbar = pts.iter().map(|p| p.0).sum::<f64>() / m;
    let ybar = pts.iter().map(|p| p.1).sum::<f64>() / m;
    let stt: f64 = pts.iter().map(|p| (p.0 - tbar).powi(2)).sum();
    let sty: f64 = pts.iter().map(|p| (p.0 - tbar) * (p.1 - ybar)).sum();
    let syy: f64 = pts.iter().map(|p| (p.1 - ybar).powi(2)).sum();
    let slope = sty / stt;
    let r_squared = if syy > 0.0 { sty * sty / (stt * syy) } else { 1.0 };
    Ok(DecayFit {
        rate: -slope,
        r_squared,
        samples: pts.len(),
        t_first: pts[0].0,
        t_last: pts[pts.len() - 1].0,
        reliable: r_squared >= MIN_R_SQUARED,
    })
}

/// Amplitude of the degree-`l` mode of the distances from `center`:
/// Fourier modes `cos, sin (l theta)` on full circles, the zonal harmonic
/// otherwise, each by discrete `L^2` projection.
pub fn mode_amplitude(state: &SurfaceState, center: &Lorentz, l: usize) -> f64 {
    let g = state.grid();
    let dev = deviation_about(state, center, 0.0);
    // remove the mean so quadrature error in the orthogonality of constants does not leak in
    let total: f64 = g.weights.iter().sum();
    let mean = g.weights.iter().zip(&dev.distances).map(|(w, d)| w * d).sum::<f64>() / total;
    let d: Vec<f64> = dev.distances.iter().map(|d| d - mean).collect();
    let project = |basis: &dyn Fn(f64) -> f64| {
        let (mut num, mut den) = (0.0, 0.0);
        for j in 0..g.len() {
            let b = basis(g.nodes[j]);
            num += g.weights[j] * d[j] * b;
            den += g.weights[j] * b * b;
        }
        num / den
    };
    match g.mode {
        GridMode::FullCircle => {
            let a = project(&|t| (l as f64 * t).cos());
            let b = project(&|t| (l as f64 * t).sin());
            a.hypot(b)
        }
        GridMode::Axisymmetric => project(&|t| zonal_harmonic(g.n, l, t)).abs(),
    }
}

/// Amplitude of mode `l` at each snapshot, re-centering each one by the
/// least-squares center (seeded from the previous one).
pub fn mode_series(snapshots: &[(f64, SurfaceState)], l: usize) -> (Vec<f64>, Vec<f64>) {
    let mut center: Lorentz = [1.0, 0.0, 0.0];
    let mut times = Vec::with_capacity(snapshots.len());
    let mut amps = Vec::with_capacity(snapshots.len());
    for (t, st) in snapshots {
        center = fit_center(st, &center);
        times.push(*t);
        amps.push(mode_amplitude(st, &center, l));
    }
    (times, amps)
}
