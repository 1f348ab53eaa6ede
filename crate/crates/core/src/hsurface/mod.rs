//! Hypersurface representations: radial graphs over geodesic spheres and
//! support functions of the Klein-ball image.

pub mod grid;
pub mod klein;
pub mod radial;
pub mod shapes;
pub mod snapshot;
pub mod support;

use std::sync::Arc;

pub use grid::{omega, Grid, GridMode};
pub use klein::{curvature_via_klein, from_klein, to_klein, KleinSamples};
pub use radial::{sinh_power_integral, CurvatureField, RadialGraphState};
pub use support::{graph_from_support, support_from_graph, SupportNode, SupportState};

use crate::error::Result;
use crate::symfunc::SpeedFunction;

/// A surface in either parametrization.
#[derive(Debug, Clone, PartialEq)]
pub enum SurfaceState {
    Graph(RadialGraphState),
    Support(SupportState),
}

impl SurfaceState {
    pub fn grid(&self) -> &Arc<Grid> {
        match self {
            SurfaceState::Graph(g) => &g.grid,
            SurfaceState::Support(s) => &s.grid,
        }
    }

    pub fn n(&self) -> usize {
        self.grid().n
    }

    /// Nodal values: `r` for graphs, `s` for support functions.
    pub fn values(&self) -> &[f64] {
        match self {
            SurfaceState::Graph(g) => &g.r,
            SurfaceState::Support(s) => &s.s,
        }
    }

    pub fn column_name(&self) -> &'static str {
        match self {
            SurfaceState::Graph(_) => "r",
            SurfaceState::Support(_) => "s",
        }
    }

    pub fn geometry(&self) -> Result<CurvatureField> {
        match self {
            SurfaceState::Graph(g) => g.geometry(),
            SurfaceState::Support(s) => s.geometry(),
        }
    }

    pub fn curvature(&self, speed: &SpeedFunction) -> Result<CurvatureField> {
        self.geometry()?.with_speed(speed)
    }

    pub fn area_and_volume(&self) -> Result<(f64, f64)> {
        match self {
            SurfaceState::Graph(g) => g.area_and_volume(),
            SurfaceState::Support(s) => s.area_and_volume(),
        }
    }

    /// Radial graph of the same body on the same grid.
    pub fn to_graph(&self) -> Result<RadialGraphState> {
        match self {
            SurfaceState::Graph(g) => Ok(g.clone()),
            SurfaceState::Support(s) => graph_from_support(s, s.grid.clone()),
        }
    }
}

impl From<RadialGraphState> for SurfaceState {
    fn from(g: RadialGraphState) -> Self {
        SurfaceState::Graph(g)
    }
}

impl From<SupportState> for SurfaceState {
    fn from(s: SupportState) -> Self {
        SurfaceState::Support(s)
    }
}
