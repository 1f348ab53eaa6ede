use thiserror::Error;

/// Errors raised by the simulator library.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("curvature argument outside the positive cone: {0:?}")]
    Domain(Vec<f64>),

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("non-positive radius {value} at node {node}")]
    NonPositiveRadius { node: usize, value: f64 },

    #[error("pole regularity check failed at node {node} (one-sided slope {slope:e})")]
    PoleSingularity { node: usize, slope: f64 },

    #[error("body is not strictly convex: {0}")]
    NotConvex(String),

    #[error("body is not h-convex (min curvature {min_kappa})")]
    NotHConvex { min_kappa: f64 },

    #[error("singular tau matrix at node {node} (eigenvalue {value:e})")]
    SingularTau { node: usize, value: f64 },

    #[error("support body leaves the unit ball at node {node}")]
    BallEscape { node: usize },

    #[error("degenerate denominator in global term: {0}")]
    DegenerateDenominator(f64),

    #[error("step size collapsed to {dt:e} at t = {t}")]
    StepCollapse { t: f64, dt: f64 },

    #[error("invariant violated: {0}")]
    Invariant(String),

    #[error("value {value} outside the range of the ball function")]
    OutOfRange { value: f64 },

    #[error("fit window has {found} qualifying samples, need {needed}")]
    InsufficientWindow { found: usize, needed: usize },

    #[error("reflection bisection failed: {0}")]
    BisectionFail(String),

    #[error("run configuration does not match the requested check: {0}")]
    ModeMismatch(String),

    #[error("unknown speed function `{0}`")]
    UnknownSpeed(String),

    #[error("invalid configuration at `{path}`: {message}")]
    Config { path: String, message: String },

    #[error("parse error: {0}")]
    Parse(String),

    #[error("i/o error: {0}")]
    Io(String),
}

impl Error {
    pub fn config(path: impl Into<String>, message: impl Into<String>) -> Self {
        Error::Config {
            path: path.into(),
            message: message.into(),
        }
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
