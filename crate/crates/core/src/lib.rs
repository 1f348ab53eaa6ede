//! Simulator and verification library for quermassintegral- and
//! volume-preserving curvature flows of h-convex hypersurfaces in hyperbolic
//! space `H^{n+1}`.

pub mod diagnostics;
pub mod error;
pub mod flowcore;
pub mod hsurface;
pub mod measures;
pub mod quad;
pub mod real;
pub mod symfunc;

pub use error::{Error, Result};
pub use hsurface::{CurvatureField, Grid, GridMode, RadialGraphState, SupportState, SurfaceState};
pub use symfunc::{SpeedFunction, SpeedKind};
