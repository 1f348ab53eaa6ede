//! Gauss-Legendre rules and adaptive integration on intervals.

use std::f64::consts::PI;

/// Nodes and weights of the m-point Gauss-Legendre rule on [-1, 1].
pub fn gauss_legendre(m: usize) -> (Vec<f64>, Vec<f64>) {
    let mut x = vec![0.0; m];
    let mut w = vec![0.0; m];
    for i in 0..m.div_ceil(2) {
        let mut z = (PI * (i as f64 + 0.75) / (m as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, z);
            for k in 2..=m {
                let p2 = ((2 * k - 1) as f64 * z * p1 - (k - 1) as f64 * p0) / k as f64;
                p0 = p1;
                p1 = p2;
            }
            if m == 1 {
                p1 = z;
                p0 = 1.0;
            }
            dp = m as f64 * (z * p1 - p0) / (z * z - 1.0);
            let dz = p1 / dp;
            z -= dz;
            if dz.abs() < 1e-16 {
                break;
            }
        }
        x[i] = -z;
        x[m - 1 - i] = z;
        w[i] = 2.0 / ((1.0 - z * z) * dp * dp);
        w[m - 1 - i] = w[i];
    }
    (x, w)
}

thread_local! {
    static GL20: (Vec<f64>, Vec<f64>) = gauss_legendre(20);
}

fn gl_panel(f: &impl Fn(f64) -> f64, a: f64, b: f64) -> f64 {
    GL20.with(|(x, w)| {
        let (c, h) = (0.5 * (a + b), 0.5 * (b - a));
        x.iter().zip(w).map(|(xi, wi)| wi * f(c + h * xi)).sum::<f64>() * h
    })
}

/// Adaptive bisection on 20-point Gauss-Legendre panels.
pub fn integrate(f: impl Fn(f64) -> f64, a: f64, b: f64, rel_tol: f64) -> f64 {
    fn rec(f: &impl Fn(f64) -> f64, a: f64, b: f64, whole: f64, tol: f64, depth: u32) -> f64 {
        let m = 0.5 * (a + b);
        let (l, r) = (gl_panel(f, a, m), gl_panel(f, m, b));
        if depth == 0 || (l + r - whole).abs() <= tol {
            l + r
        } else {
            rec(f, a, m, l, 0.5 * tol, depth - 1) + rec(f, m, b, r, 0.5 * tol, depth - 1)
        }
    }
    if a == b {
        return 0.0;
    }
    let whole = gl_panel(&f, a, b);
    let tol = rel_tol * whole.abs().max(f64::MIN_POSITIVE);
    rec(&f, a, b, whole, tol, 30)
}

/// Legendre polynomial `P_l(x)` by the three-term recurrence.
pub fn legendre_p(l: usize, x: f64) -> f64 {
    let (mut p0, mut p1) = (1.0, x);
    if l == 0 {
        return p0;
    }
    for k in 1..l {
        let p2 = ((2 * k + 1) as f64 * x * p1 - k as f64 * p0) / (k + 1) as f64;
        p0 = p1;
        p1 = p2;
    }
    p1
}

/// Zonal spherical harmonic of degree `l` on `S^n`, normalized to 1 at the
/// pole: `cos(l theta)` for n = 1, Gegenbauer `C_l^{(n-1)/2}(cos theta)` otherwise.
pub fn zonal_harmonic(n: usize, l: usize, theta: f64) -> f64 {
    if n == 1 {
        return (l as f64 * theta).cos();
    }
    let lam = 0.5 * (n as f64 - 1.0);
    let gegenbauer = |x: f64| {
        let (mut c0, mut c1) = (1.0, 2.0 * lam * x);
        if l == 0 {
            return c0;
        }
        for k in 1..l {
            let kf = k as f64;
            let c2 = (2.0 * (kf + lam) * x * c1 - (kf + 2.0 * lam - 1.0) * c0) / (kf + 1.0);
            c0 = c1;
            c1 = c2;
        }
        c1
    };
    gegenbauer(theta.cos()) / gegenbauer(1.0)
}
