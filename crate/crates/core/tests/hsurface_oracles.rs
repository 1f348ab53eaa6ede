use std::f64::consts::PI;

use quermass_core::hsurface::klein::{minkowski, Lorentz};
use quermass_core::hsurface::{
    curvature_via_klein, graph_from_support, support_from_graph, Grid, GridMode, RadialGraphState, SupportState,
};

/// Profile `r(theta)` with its first two derivatives.
type Profile = fn(f64) -> (f64, f64, f64);

fn ellipse_like(t: f64) -> (f64, f64, f64) {
    (1.0 + 0.1 * (2.0 * t).cos(), -0.2 * (2.0 * t).sin(), -0.4 * (2.0 * t).cos())
}

/// Geodesic curvature of `theta -> (cosh r, sinh r cos, sinh r sin)` computed
/// from Lorentzian derivatives in the hyperboloid model.
fn hyperboloid_kappa(profile: Profile, t: f64) -> f64 {
    let (r, p, q) = profile(t);
    let (sh, ch) = (r.sinh(), r.cosh());
    let (s1, s2) = (ch * p, sh * p * p + ch * q);
    let (c1, c2) = (sh * p, ch * p * p + sh * q);
    let (co, si) = (t.cos(), t.sin());
    let x: Lorentz = [ch, sh * co, sh * si];
    let d1: Lorentz = [c1, s1 * co - sh * si, s1 * si + sh * co];
    let d2: Lorentz = [c2, s2 * co - 2.0 * s1 * si - sh * co, s2 * si + 2.0 * s1 * co - sh * si];
    // Lorentz-orthogonal complement of span{X, X'}
    let e = [
        x[1] * d1[2] - x[2] * d1[1],
        x[2] * d1[0] - x[0] * d1[2],
        x[0] * d1[1] - x[1] * d1[0],
    ];
    let mut nu = [-e[0], e[1], e[2]];
    let norm = minkowski(&nu, &nu).sqrt();
    let radial = [sh, ch * co, ch * si];
    let sign = if minkowski(&nu, &radial) > 0.0 { 1.0 } else { -1.0 };
    for c in nu.iter_mut() {
        *c *= sign / norm;
    }
    -minkowski(&d2, &nu) / minkowski(&d1, &d1)
}

fn graph_error(m: usize) -> f64 {
    let grid = Grid::new(1, GridMode::FullCircle, m).unwrap();
    let st = RadialGraphState::from_fn(grid.clone(), |t| ellipse_like(t).0).unwrap();
    let field = st.geometry().unwrap();
    grid.nodes
        .iter()
        .zip(&field.kappa)
        .map(|(&t, k)| {
            let exact = hyperboloid_kappa(ellipse_like, t);
            ((k - exact) / exact).abs()
        })
        .fold(0.0, f64::max)
}

#[test]
fn graph_curvature_matches_hyperboloid_oracle_at_second_order() {
    let (e1, e2, e3) = (graph_error(64), graph_error(128), graph_error(256));
    assert!(e3 < 1e-3, "{e3}");
    assert!(e1 / e2 >= 3.6 && e2 / e3 >= 3.6, "{e1} {e2} {e3}");
}

#[test]
fn klein_relation_reproduces_direct_curvature() {
    let grid = Grid::new(1, GridMode::FullCircle, 128).unwrap();
    let st = RadialGraphState::from_fn(grid, |t| ellipse_like(t).0).unwrap();
    let direct = st.geometry().unwrap().kappa;
    for (a, b) in direct.iter().zip(curvature_via_klein(&st)) {
        assert!(((a - b) / a).abs() < 1e-11, "{a} {b}");
    }
    let grid = Grid::new(2, GridMode::Axisymmetric, 65).unwrap();
    let st = RadialGraphState::from_fn(grid, |t| 1.0 + 0.1 * (3.0 * t.cos().powi(2) - 1.0) / 2.0).unwrap();
    let direct = st.geometry().unwrap().kappa;
    for (a, b) in direct.iter().zip(curvature_via_klein(&st)) {
        assert!(((a - b) / a).abs() < 1e-10, "{a} {b}");
    }
}

/// Support-scheme curvature at each support node, compared with the exact
/// curvature at the boundary point that node represents.
fn support_error(m: usize) -> f64 {
    let fine = Grid::new(1, GridMode::FullCircle, 4096).unwrap();
    let body = RadialGraphState::from_fn(fine, |t| ellipse_like(t).0).unwrap();
    let sp_fine = support_from_graph(&body).unwrap();
    // sample the fine support function on the coarse grid
    let grid = Grid::new(1, GridMode::FullCircle, m).unwrap();
    let stride = 4096 / m;
    let s: Vec<f64> = (0..m).map(|j| sp_fine.s[j * stride]).collect();
    let sp = SupportState::new(grid.clone(), s).unwrap();
    let field = sp.geometry().unwrap();
    let mut worst: f64 = 0.0;
    for j in 0..m {
        let sv = sp.s[j];
        let ds = grid.d1(&sp.s, j);
        let theta = grid.nodes[j] + ds.atan2(sv);
        let exact = hyperboloid_kappa(ellipse_like, theta);
        worst = worst.max(((field.kappa[j] - exact) / exact).abs());
    }
    worst
}

#[test]
fn support_curvature_agrees_with_hyperboloid_oracle() {
    let (e1, e2) = (support_error(64), support_error(128));
    assert!(e2 < 2e-3, "{e2}");
    assert!(e1 / e2 >= 3.2, "{e1} {e2}");
}

#[test]
fn support_and_graph_detect_h_convexity_consistently() {
    let grid = Grid::new(1, GridMode::FullCircle, 256).unwrap();
    let st = RadialGraphState::from_fn(grid.clone(), |t| ellipse_like(t).0).unwrap();
    let sp = support_from_graph(&st).unwrap();
    let a = st.geometry().unwrap().min_kappa();
    let b = sp.geometry().unwrap().min_kappa();
    assert!(a > 1.0 && b > 1.0);
    assert!((a - b).abs() < 10.0 * grid.h * grid.h, "{a} {b}");
}

#[test]
fn graph_support_round_trip_is_second_order() {
    let err = |m: usize| {
        let grid = Grid::new(1, GridMode::FullCircle, m).unwrap();
        let st = RadialGraphState::from_fn(grid.clone(), |t| ellipse_like(t).0).unwrap();
        let back = graph_from_support(&support_from_graph(&st).unwrap(), grid).unwrap();
        st.r.iter().zip(&back.r).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max)
    };
    let (e1, e2) = (err(64), err(128));
    assert!(e2 < 1e-4, "{e2}");
    assert!(e1 / e2 >= 3.2, "{e1} {e2}");
}

#[test]
fn axisymmetric_round_trip() {
    let grid = Grid::new(2, GridMode::Axisymmetric, 129).unwrap();
    let st = RadialGraphState::from_fn(grid.clone(), |t| 1.0 + 0.05 * (3.0 * t.cos().powi(2) - 1.0)).unwrap();
    let back = graph_from_support(&support_from_graph(&st).unwrap(), grid).unwrap();
    for (a, b) in st.r.iter().zip(&back.r) {
        assert!((a - b).abs() < 1e-4);
    }
}

#[test]
fn translated_euclidean_ball_support_is_affine() {
    let (a, p) = (0.5, [0.03, -0.02]);
    let grid = Grid::new(1, GridMode::FullCircle, 256).unwrap();
    let st = RadialGraphState::from_fn(grid.clone(), |t| {
        let pe = p[0] * t.cos() + p[1] * t.sin();
        let rho = pe + (pe * pe - p[0] * p[0] - p[1] * p[1] + a * a).sqrt();
        rho.atanh()
    })
    .unwrap();
    let sp = support_from_graph(&st).unwrap();
    for (j, &psi) in grid.nodes.iter().enumerate() {
        let expect = a + p[0] * psi.cos() + p[1] * psi.sin();
        assert!((sp.s[j] - expect).abs() < 1e-4, "{} {}", sp.s[j], expect);
    }
}

#[test]
fn sphere_curvatures_follow_coth() {
    let grid = Grid::new(2, GridMode::Axisymmetric, 33).unwrap();
    for r0 in [0.3, 1.0, 2.5] {
        let k = RadialGraphState::sphere(grid.clone(), r0).unwrap().geometry().unwrap().kappa;
        let ks = SupportState::sphere(grid.clone(), r0).unwrap().geometry().unwrap().kappa;
        for (a, b) in k.iter().zip(&ks) {
            assert!((a - 1.0 / r0.tanh()).abs() < 1e-10);
            assert!((b - 1.0 / r0.tanh()).abs() < 1e-10);
        }
    }
    let _ = PI;
}
