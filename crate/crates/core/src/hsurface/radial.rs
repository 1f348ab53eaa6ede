//! Radial graphs `r(theta)` over geodesic spheres about a fixed center.

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::hsurface::grid::{Grid, GridMode};
use crate::real::Real;
use crate::symfunc::SpeedFunction;

#[derive(Debug, Clone, PartialEq)]
pub struct RadialGraphState {
    pub grid: Arc<Grid>,
    pub r: Vec<f64>,
    /// Set when the graph center is not meaningful for centered diagnostics.
    pub centerless: bool,
}

/// Pointwise geometry of a hypersurface on its grid.
#[derive(Debug, Clone, PartialEq)]
pub struct CurvatureField {
    pub n: usize,
    pub v: Vec<f64>,
    /// Node-major principal curvatures, `n` entries per node.
    pub kappa: Vec<f64>,
    /// Area element relative to the grid measure `dsigma`.
    pub density: Vec<f64>,
    /// `F = f(kappa)` per node; empty when no speed was supplied.
    pub f: Vec<f64>,
    /// `Psi = F^alpha` per node; empty when no speed was supplied.
    pub psi: Vec<f64>,
}

impl CurvatureField {
    pub fn len(&self) -> usize {
        self.v.len()
    }

    pub fn is_empty(&self) -> bool {
        self.v.is_empty()
    }

    pub fn kappa_at(&self, j: usize) -> &[f64] {
        &self.kappa[j * self.n..(j + 1) * self.n]
    }

    pub fn min_kappa(&self) -> f64 {
        self.kappa.iter().cloned().fold(f64::INFINITY, f64::min)
    }

    pub fn max_f(&self) -> f64 {
        self.f.iter().cloned().fold(f64::NEG_INFINITY, f64::max)
    }

    /// Evaluate `F` and `Psi` for the given speed at every node.
    pub fn with_speed(mut self, speed: &SpeedFunction) -> Result<Self> {
        if speed.n != self.n {
            return Err(Error::DimensionMismatch {
                expected: self.n,
                got: speed.n,
            });
        }
        let mut f = Vec::with_capacity(self.len());
        for j in 0..self.len() {
            f.push(speed.eval(self.kappa_at(j))?);
        }
        self.psi = f.iter().map(|x| x.powf(speed.alpha)).collect();
        self.f = f;
        Ok(self)
    }
}

/// Geometry at one node: gradient factor, the two distinct principal
/// curvatures and the area density `v sinh^n r`.
#[derive(Debug, Clone, Copy)]
pub(crate) struct NodeGeometry<T> {
    pub v: T,
    pub k_theta: T,
    pub k_az: T,
    pub density: T,
}

/// `r` is the node value, `p = r'`, `q = r''`, `a` the azimuthal Hessian term.
#[inline]
pub(crate) fn node_geometry<T: Real>(n: usize, r: T, p: T, q: T, a: T) -> NodeGeometry<T> {
    let s = r.sinh();
    let c = r.cosh();
    let coth = c / s;
    let s2 = s * s;
    let v2 = T::cst(1.0) + p * p / s2;
    let v = v2.sqrt();
    let w = v * v2 * s2;
    let k_theta = coth / v + coth * p * p / w - q / w;
    let k_az = coth / v - a / (v * s2);
    NodeGeometry {
        v,
        k_theta,
        k_az,
        density: v * s.powi(n as i32),
    }
}

#[inline]
pub(crate) fn node_geometry_at<T: Real>(grid: &Grid, r: &[T], j: usize) -> NodeGeometry<T> {
    let p = grid.d1(r, j);
    let q = grid.d2(r, j);
    let a = if grid.n > 1 { grid.azimuthal(r, j) } else { T::cst(0.0) };
    node_geometry(grid.n, r[j], p, q, a)
}

/// `I_n(r) = int_0^r sinh^n`, the volume of the geodesic cone per unit solid angle.
pub fn sinh_power_integral(n: usize, r: f64) -> f64 {
    if r < 1.0 {
        // Gauss-Legendre avoids the cancellation of the closed form near zero
        return GL16.with(|(x, w)| {
            0.5 * r
                * x.iter()
                    .zip(w)
                    .map(|(xi, wi)| wi * (0.5 * r * (1.0 + xi)).sinh().powi(n as i32))
                    .sum::<f64>()
        });
    }
    let (s, c) = (r.sinh(), r.cosh());
    let mut lo = r; // I_0
    let mut hi = c - 1.0; // I_1
    if n == 0 {
        return lo;
    }
    for m in 2..=n {
        let next = s.powi(m as i32 - 1) * c / m as f64 - (m as f64 - 1.0) / m as f64 * lo;
        lo = hi;
        hi = next;
    }
    hi
}

/// Generic version of [`sinh_power_integral`] carrying tangents.
#[inline]
pub(crate) fn sinh_power_integral_t<T: Real>(n: usize, r: T) -> T {
    let x = r.re();
    r.lift(sinh_power_integral(n, x), x.sinh().powi(n as i32))
}

thread_local! {
    static GL16: (Vec<f64>, Vec<f64>) = crate::quad::gauss_legendre(16);
}

impl RadialGraphState {
    pub fn new(grid: Arc<Grid>, r: Vec<f64>) -> Result<Self> {
        if r.len() != grid.len() {
            return Err(Error::DimensionMismatch {
                expected: grid.len(),
                got: r.len(),
            });
        }
        if let Some((node, &value)) = r.iter().enumerate().find(|(_, &v)| !(v > 0.0 && v.is_finite())) {
            return Err(Error::NonPositiveRadius { node, value });
        }
        Ok(Self {
            grid,
            r,
            centerless: false,
        })
    }

    /// Geodesic sphere of radius `r0` about the model center.
    pub fn sphere(grid: Arc<Grid>, r0: f64) -> Result<Self> {
        let r = vec![r0; grid.len()];
        Self::new(grid, r)
    }

    pub fn from_fn(grid: Arc<Grid>, f: impl Fn(f64) -> f64) -> Result<Self> {
        let r = grid.nodes.iter().map(|&t| f(t)).collect();
        Self::new(grid, r)
    }

    pub fn n(&self) -> usize {
        self.grid.n
    }

    pub fn mode(&self) -> GridMode {
        self.grid.mode
    }

    /// Compare the L'Hopital pole value `r''` with `cot(theta) r'` at the
    /// first interior node; a kink at a pole makes the two disagree at O(1/h^2).
    pub fn check_poles(&self) -> Result<()> {
        let g = &*self.grid;
        if g.mode != GridMode::Axisymmetric || g.n < 2 {
            return Ok(());
        }
        let m = g.len();
        let scale = (0..m).map(|j| g.d2(&self.r, j).abs()).fold(0.0, f64::max);
        for (pole, inner) in [(0, 1), (m - 1, m - 2)] {
            let limit = g.d2(&self.r, pole);
            let near = g.azimuthal(&self.r, inner);
            if (limit - near).abs() > 0.5 * scale + 1e-8 {
                return Err(Error::PoleSingularity {
                    node: pole,
                    slope: limit - near,
                });
            }
        }
        Ok(())
    }

    /// Speed-independent geometry (`f` and `psi` left empty).
    pub fn geometry(&self) -> Result<CurvatureField> {
        self.check_poles()?;
        let g = &*self.grid;
        let n = g.n;
        let m = g.len();
        let mut field = CurvatureField {
            n,
            v: Vec::with_capacity(m),
            kappa: Vec::with_capacity(m * n),
            density: Vec::with_capacity(m),
            f: Vec::new(),
            psi: Vec::new(),
        };
        for j in 0..m {
            let ng = node_geometry_at(g, &self.r, j);
            field.v.push(ng.v);
            field.kappa.push(ng.k_theta);
            for _ in 1..n {
                field.kappa.push(ng.k_az);
            }
            field.density.push(ng.density);
        }
        Ok(field)
    }

    pub fn curvature(&self, speed: &SpeedFunction) -> Result<CurvatureField> {
        self.geometry()?.with_speed(speed)
    }

    /// Area `|M|` and enclosed volume `|Omega|`.
    pub fn area_and_volume(&self) -> Result<(f64, f64)> {
        let field = self.geometry()?;
        let area = self.grid.integrate(field.density.iter().copied());
        let volume = self
            .grid
            .integrate(self.r.iter().map(|&r| sinh_power_integral(self.n(), r)));
        Ok((area, volume))
    }
}
