//! Shared fixtures for the kernel benchmarks.

use quermass_core::flowcore::{Flow, FlowConfig, Scheme};
use quermass_core::hsurface::shapes::build_shape;
use quermass_core::hsurface::support_from_graph;
use quermass_core::SurfaceState;

/// A perturbed body and the flow that moves it.
pub struct Fixture {
    pub flow: Flow,
    pub state: SurfaceState,
}

pub fn fixture(n: usize, scheme: Scheme, nodes: usize) -> Fixture {
    let speed = if n == 1 { "Ek_root(1)" } else { "Ek_root(2)" };
    let mut cfg = FlowConfig::new(n, n, speed, 1.0, 1.0);
    cfg.scheme = scheme;
    cfg.grid = Some(nodes);
    let grid = cfg.make_grid().expect("valid grid");
    let shape = if n == 1 {
        "perturbed_circle(1, 0.1, 2)"
    } else {
        "perturbed_sphere(1, 0.1, 2)"
    };
    let graph = build_shape(shape, grid, 0).expect("valid shape");
    let state = match scheme {
        Scheme::RadialGraph => graph.into(),
        Scheme::SupportFunction => support_from_graph(&graph).expect("h-convex body").into(),
    };
    Fixture {
        flow: Flow::new(cfg).expect("valid config"),
        state,
    }
}
