//! Long-time analysis of flow runs.

pub mod appendix;
pub mod deviation;
pub mod rate;
pub mod reflection;
pub mod report;
pub mod svg;

pub use appendix::{appendix_checks, AppendixReport};
pub use deviation::{fit_center, sphere_deviation, SphereDeviation};
pub use rate::{fit_decay, linearized_rate, mode_amplitude, mode_series, DecayFit};
pub use reflection::{reflection_s_plus, Axis};
pub use report::{analyze, AnalysisOptions, DiagnosticsReport};
pub use svg::render_svg;
