//! Quermassintegrals of geodesic balls, `f_k(r) = W_k(B_r)`, and their inverses.

use crate::error::{Error, Result};
use crate::hsurface::grid::omega;
use crate::quad::integrate;

fn prefactor(n: usize, k: usize) -> f64 {
    (n + 1 - k) as f64 / (n + 1) as f64 * omega(n)
}

fn integrand(n: usize, k: usize, s: f64) -> f64 {
    s.cosh().powi(k as i32) * s.sinh().powi((n - k) as i32)
}

/// `f_k(r) = ((n+1-k)/(n+1)) omega_n int_0^r cosh^k sinh^(n-k)`, with the
/// constant `f_{n+1} = omega_n / (n+1)`.
pub fn ball_w(n: usize, k: usize, r: f64) -> f64 {
    assert!(k <= n + 1, "k = {k} exceeds n + 1 = {}", n + 1);
    if k == n + 1 {
        return omega(n) / (n + 1) as f64;
    }
    prefactor(n, k) * integrate(|s| integrand(n, k, s), 0.0, r, 1e-15)
}

/// `d f_k / dr`.
pub fn ball_w_derivative(n: usize, k: usize, r: f64) -> f64 {
    if k == n + 1 {
        0.0
    } else {
        prefactor(n, k) * integrand(n, k, r)
    }
}

/// Radius of the geodesic ball with `W_k(B_r) = w`, to 1e-12 in `r`.
pub fn ball_w_inverse(n: usize, k: usize, w: f64) -> Result<f64> {
    if k > n || !(w > 0.0) || !w.is_finite() {
        return Err(Error::OutOfRange { value: w });
    }
    let mut hi = 1.0;
    while ball_w(n, k, hi) < w {
        hi *= 2.0;
        if hi > 700.0 {
            return Err(Error::OutOfRange { value: w });
        }
    }
    let mut lo = 0.0;
    let mut r = 0.5 * hi;
    for _ in 0..200 {
        let g = ball_w(n, k, r) - w;
        if g > 0.0 {
            hi = r;
        } else {
            lo = r;
        }
        let d = ball_w_derivative(n, k, r);
        let mut next = r - g / d;
        if !(next > lo && next < hi) || !next.is_finite() {
            next = 0.5 * (lo + hi);
        }
        let step = (next - r).abs();
        r = next;
        if step < 1e-14 || hi - lo < 1e-14 {
            break;
        }
    }
    Ok(r)
}
