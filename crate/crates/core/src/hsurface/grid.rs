//! Uniform angular grids, centered stencils and quadrature weights.

use std::f64::consts::PI;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::quad::gauss_legendre;
use crate::real::Real;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GridMode {
    /// Zonal profile over the polar angle, nodes on [0, pi] including both poles.
    Axisymmetric,
    /// Periodic grid on [0, 2 pi) for curves in H^2 (n = 1).
    FullCircle,
}

impl GridMode {
    pub fn as_str(self) -> &'static str {
        match self {
            GridMode::Axisymmetric => "axisymmetric",
            GridMode::FullCircle => "full_circle",
        }
    }
}

/// Area of the unit sphere `S^m` in `R^{m+1}`.
pub fn omega(m: usize) -> f64 {
    match m {
        0 => 2.0,
        1 => 2.0 * PI,
        _ => 2.0 * PI / (m as f64 - 1.0) * omega(m - 2),
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Grid {
    pub n: usize,
    pub mode: GridMode,
    pub nodes: Vec<f64>,
    pub h: f64,
    /// Quadrature weights for `int_{S^n} g dsigma` applied to node values of g.
    pub weights: Vec<f64>,
}

impl Grid {
    pub fn new(n: usize, mode: GridMode, count: usize) -> Result<Arc<Self>> {
        if n == 0 {
            return Err(Error::config("n", "dimension must be positive"));
        }
        match mode {
            GridMode::FullCircle => {
                if n != 1 {
                    return Err(Error::config("mode", "full_circle grids require n = 1"));
                }
                if count < 8 {
                    return Err(Error::config("grid", "full_circle grids need at least 8 nodes"));
                }
                let h = 2.0 * PI / count as f64;
                Ok(Arc::new(Self {
                    n,
                    mode,
                    nodes: (0..count).map(|j| j as f64 * h).collect(),
                    h,
                    weights: vec![h; count],
                }))
            }
            GridMode::Axisymmetric => {
                if count < 5 || count % 2 == 0 {
                    return Err(Error::config("grid", "axisymmetric grids need an odd node count >= 5"));
                }
                let h = PI / (count - 1) as f64;
                let nodes: Vec<f64> = (0..count).map(|j| j as f64 * h).collect();
                let weights = product_simpson(&nodes, h, n - 1)
                    .into_iter()
                    .map(|w| w * omega(n - 1))
                    .collect();
                Ok(Arc::new(Self {
                    n,
                    mode,
                    nodes,
                    h,
                    weights,
                }))
            }
        }
    }

    /// Default resolutions: 256 periodic nodes for n = 1, 129 polar nodes otherwise.
    pub fn default_for(n: usize) -> Result<Arc<Self>> {
        if n == 1 {
            Self::new(1, GridMode::FullCircle, 256)
        } else {
            Self::new(n, GridMode::Axisymmetric, 129)
        }
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn is_pole(&self, j: usize) -> bool {
        self.mode == GridMode::Axisymmetric && (j == 0 || j + 1 == self.len())
    }

    #[inline]
    fn neighbours<T: Copy>(&self, u: &[T], j: usize) -> (T, T) {
        let m = u.len();
        match self.mode {
            GridMode::FullCircle => (u[(j + m - 1) % m], u[(j + 1) % m]),
            // even reflection ghost nodes at the poles
            GridMode::Axisymmetric => {
                if j == 0 {
                    (u[1], u[1])
                } else if j + 1 == m {
                    (u[m - 2], u[m - 2])
                } else {
                    (u[j - 1], u[j + 1])
                }
            }
        }
    }

    #[inline]
    pub fn d1<T: Real>(&self, u: &[T], j: usize) -> T {
        let (a, b) = self.neighbours(u, j);
        (b - a).scale(0.5 / self.h)
    }

    #[inline]
    pub fn d2<T: Real>(&self, u: &[T], j: usize) -> T {
        let (a, b) = self.neighbours(u, j);
        (a + b - u[j] - u[j]).scale(1.0 / (self.h * self.h))
    }

    /// Mixed azimuthal Hessian entry `cot(theta) u'`, with the pole limit `u''`.
    #[inline]
    pub fn azimuthal<T: Real>(&self, u: &[T], j: usize) -> T {
        if self.is_pole(j) {
            self.d2(u, j)
        } else {
            let th = self.nodes[j];
            self.d1(u, j).scale(th.cos() / th.sin())
        }
    }

    /// `sin(theta_j)^(n-1)`; constant 1 on full-circle grids.
    pub fn zonal_factor(&self, j: usize) -> f64 {
        match self.mode {
            GridMode::FullCircle => 1.0,
            GridMode::Axisymmetric => self.nodes[j].sin().powi(self.n as i32 - 1),
        }
    }

    pub fn integrate(&self, values: impl IntoIterator<Item = f64>) -> f64 {
        self.weights.iter().zip(values).map(|(w, v)| w * v).sum()
    }
}

/// Simpson weights for `int_0^pi g(theta) sin^p(theta) dtheta`, with the sine
/// factor integrated exactly against the piecewise quadratic interpolant of g.
fn product_simpson(nodes: &[f64], h: f64, p: usize) -> Vec<f64> {
    let (gx, gw) = gauss_legendre(24);
    let mut w = vec![0.0; nodes.len()];
    for panel in (0..nodes.len() - 1).step_by(2) {
        let a = nodes[panel];
        for (xi, wi) in gx.iter().zip(&gw) {
            // local coordinate t in [0, 2] across the panel
            let t = 1.0 + xi;
            let theta = a + t * h;
            let jac = wi * h * theta.sin().powi(p as i32);
            let l0 = 0.5 * (t - 1.0) * (t - 2.0);
            let l1 = -t * (t - 2.0);
            let l2 = 0.5 * t * (t - 1.0);
            w[panel] += jac * l0;
            w[panel + 1] += jac * l1;
            w[panel + 2] += jac * l2;
        }
    }
    w
}
