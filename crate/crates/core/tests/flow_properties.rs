use proptest::prelude::*;

use quermass_core::diagnostics::{fit_decay, linearized_rate};
use quermass_core::flowcore::{run, Flow, FlowConfig, Termination};
use quermass_core::hsurface::shapes::build_shape;
use quermass_core::measures::quermassintegrals;
use quermass_core::quad::zonal_harmonic;
use quermass_core::{Error, RadialGraphState, SurfaceState};

fn config(n: usize, k: usize, speed: &str, alpha: f64, t_end: f64, nodes: usize) -> FlowConfig {
    let mut cfg = FlowConfig::new(n, k, speed, alpha, t_end);
    cfg.grid = Some(nodes);
    cfg
}

fn initial(cfg: &FlowConfig, shape: &str, seed: u64) -> SurfaceState {
    build_shape(shape, cfg.make_grid().unwrap(), seed).unwrap().into()
}

#[test]
fn spheres_are_stationary() {
    for (n, speed) in [(1, "Ek_root(1)"), (2, "Ek_root(2)"), (2, "power_mean(2)")] {
        for alpha in [0.5, 2.0] {
            let mut cfg = config(n, n, speed, alpha, 0.5, if n == 1 { 64 } else { 33 });
            cfg.monitors.converge_tol = 0.0;
            let st = RadialGraphState::sphere(cfg.make_grid().unwrap(), 0.8).unwrap();
            let out = run(&cfg, st.into()).unwrap();
            assert_eq!(out.termination, Some(Termination::TimeEnd));
            let dev = out.state.values().iter().map(|r| (r - 0.8).abs()).fold(0.0, f64::max);
            assert!(dev < 1e-12, "{speed} alpha={alpha}: {dev:e}");
        }
    }
}

#[test]
fn runs_are_deterministic() {
    let cfg = config(1, 1, "Ek_root(1)", 1.0, 0.3, 64);
    let a = run(&cfg, initial(&cfg, "random_circle(1, 0.01, 4)", 9)).unwrap();
    let b = run(&cfg, initial(&cfg, "random_circle(1, 0.01, 4)", 9)).unwrap();
    assert_eq!(a.state.values(), b.state.values());
    assert_eq!(a.steps, b.steps);
}

#[test]
fn drift_beyond_the_limit_stops_the_run() {
    let mut cfg = config(1, 1, "Ek_root(1)", 1.0, 1.0, 32);
    cfg.c_cfl = 0.6;
    cfg.output_every = Some(0.5);
    cfg.monitors.max_drift = 1e-20;
    let out = run(&cfg, initial(&cfg, "perturbed_circle(1, 0.1, 2)", 0)).unwrap();
    assert_eq!(out.termination, Some(Termination::InvariantViolation));
    assert!(matches!(out.failure, Some(Error::Invariant(_))));
}

#[test]
fn support_runs_preserve_the_constraint() {
    let mut cfg = config(1, 1, "Ek_root(1)", 1.0, 0.5, 128);
    cfg.scheme = quermass_core::flowcore::Scheme::SupportFunction;
    let out = run(&cfg, initial(&cfg, "perturbed_circle(1, 0.05, 2)", 0)).unwrap();
    assert_eq!(out.termination, Some(Termination::TimeEnd));
    assert!(out.max_drift() < 1e-4, "{:e}", out.max_drift());
    assert!(out.final_output().sphere_dev_linf < out.initial.sphere_dev_linf);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn one_step_conserves_the_quermassintegral(
        seed in 0u64..1000,
        amp in 0.002f64..0.02,
        k in 0usize..=2,
        alpha in 0.5f64..2.0,
    ) {
        let cfg = config(2, k, "Ek_root(2)", alpha, 1.0, 33);
        let st = initial(&cfg, &format!("perturbed_sphere(1, {amp}, 2)"), seed);
        let flow = Flow::new(cfg).unwrap();
        let eval = flow.evaluate(&st).unwrap();
        let dt = flow.stable_dt(&st, &eval).unwrap();
        let next = flow.rk4(&st, &eval, dt).unwrap();
        let (w0, w1) = (quermassintegrals(&st).unwrap()[k], quermassintegrals(&next).unwrap()[k]);
        prop_assert!(((w1 - w0) / w0).abs() < 1e-12);
    }

    #[test]
    fn shapes_flow_toward_spheres(seed in 0u64..1000) {
        let cfg = config(1, 1, "Ek_root(1)", 1.0, 0.5, 64);
        let out = run(&cfg, initial(&cfg, "random_circle(1, 0.01, 5)", seed)).unwrap();
        prop_assert!(out.final_output().sphere_dev_linf < out.initial.sphere_dev_linf);
    }
}

/// Explicit finite-difference integration of `eta_t = c (Lap eta + n eta - n mean(eta))`
/// on the zonal harmonic of degree `l`; returns the observed decay rate.
fn linear_pde_rate(n: usize, l: usize, c: f64) -> f64 {
    let (m, periodic) = if n == 1 { (256, true) } else { (257, false) };
    let h = if periodic {
        2.0 * std::f64::consts::PI / m as f64
    } else {
        std::f64::consts::PI / (m - 1) as f64
    };
    let theta: Vec<f64> = (0..m).map(|j| j as f64 * h).collect();
    let weight: Vec<f64> = theta
        .iter()
        .enumerate()
        .map(|(j, t)| {
            if periodic {
                1.0
            } else {
                let s = t.sin().powi(n as i32 - 1);
                if j == 0 || j == m - 1 { 0.5 * s } else { s }
            }
        })
        .collect();
    let lap = |e: &[f64]| -> Vec<f64> {
        (0..m)
            .map(|j| {
                if periodic {
                    let (a, b) = (e[(j + m - 1) % m], e[(j + 1) % m]);
                    (a - 2.0 * e[j] + b) / (h * h)
                } else if j == 0 || j == m - 1 {
                    let nb = if j == 0 { e[1] } else { e[m - 2] };
                    n as f64 * 2.0 * (nb - e[j]) / (h * h)
                } else {
                    let d2 = (e[j - 1] - 2.0 * e[j] + e[j + 1]) / (h * h);
                    let d1 = (e[j + 1] - e[j - 1]) / (2.0 * h);
                    d2 + (n as f64 - 1.0) * theta[j].cos() / theta[j].sin() * d1
                }
            })
            .collect()
    };
    let rhs = |e: &[f64]| -> Vec<f64> {
        let total: f64 = weight.iter().sum();
        let mean = e.iter().zip(&weight).map(|(a, w)| a * w).sum::<f64>() / total;
        lap(e)
            .iter()
            .zip(e)
            .map(|(l, x)| c * (l + n as f64 * x - n as f64 * mean))
            .collect()
    };
    let mode: Vec<f64> = theta
        .iter()
        .map(|&t| if n == 1 { (l as f64 * t).cos() } else { zonal_harmonic(n, l, t) })
        .collect();
    let norm: f64 = mode.iter().zip(&weight).map(|(y, w)| y * y * w).sum();
    let mut eta: Vec<f64> = mode.iter().map(|y| 1e-2 * y).collect();
    let dt = 0.2 * h * h / (c * n as f64);
    let (mut t, mut times, mut amps) = (0.0, vec![], vec![]);
    let axpy = |a: &[f64], k: &[f64], s: f64| a.iter().zip(k).map(|(x, y)| x + s * y).collect::<Vec<f64>>();
    while t < 6.0 {
        let k1 = rhs(&eta);
        let k2 = rhs(&axpy(&eta, &k1, 0.5 * dt));
        let k3 = rhs(&axpy(&eta, &k2, 0.5 * dt));
        let k4 = rhs(&axpy(&eta, &k3, dt));
        for j in 0..m {
            eta[j] += dt / 6.0 * (k1[j] + 2.0 * (k2[j] + k3[j]) + k4[j]);
        }
        t += dt;
        times.push(t);
        // degrees 0 and 1 are neutral, so project onto the mode instead of taking max |eta|
        let proj = eta.iter().zip(&mode).zip(&weight).map(|((e, y), w)| e * y * w).sum::<f64>();
        amps.push((proj / norm).abs());
    }
    fit_decay(&times, &amps).unwrap().rate
}

#[test]
fn linearized_rates_match_the_linear_pde() {
    for (n, l) in [(1, 2), (1, 3), (2, 2), (2, 3), (3, 2)] {
        for alpha in [0.5, 1.0, 2.0] {
            let r: f64 = 1.0;
            let c = alpha * (1.0 / r.tanh()).powf(alpha - 1.0) / (n as f64 * r.sinh().powi(2));
            let predicted = linearized_rate(n, alpha, r, l);
            let observed = linear_pde_rate(n, l, c);
            assert!(
                (observed - predicted).abs() < 2e-3 * predicted,
                "n={n} l={l} alpha={alpha}: {observed} vs {predicted}"
            );
        }
    }
}
