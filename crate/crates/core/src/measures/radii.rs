//! Inner and outer radii by searching over candidate centers.

use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::hsurface::grid::GridMode;
use crate::hsurface::klein::{distance, hyperboloid_of, hyperboloid_point, Lorentz};
use crate::hsurface::SurfaceState;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Radii {
    pub rho_minus: f64,
    pub rho_plus: f64,
    /// Center of the largest enclosed ball.
    pub inball_center: Lorentz,
    /// Center of the smallest enclosing ball.
    pub outball_center: Lorentz,
}

const AXIS_SAMPLES: usize = 64;
const SEARCH_TOL: f64 = 1e-12;

/// Boundary samples on the hyperboloid, in the meridian plane.
pub fn boundary_points(state: &SurfaceState) -> Vec<Lorentz> {
    match state {
        SurfaceState::Graph(g) => g
            .grid
            .nodes
            .iter()
            .zip(&g.r)
            .map(|(&t, &r)| hyperboloid_point(r, t))
            .collect(),
        SurfaceState::Support(s) => {
            let g = &s.grid;
            (0..g.len())
                .map(|j| {
                    let psi = g.nodes[j];
                    let ds = g.d1(&s.s, j);
                    let y = [
                        s.s[j] * psi.cos() - ds * psi.sin(),
                        s.s[j] * psi.sin() + ds * psi.cos(),
                    ];
                    hyperboloid_of(&y)
                })
                .collect()
        }
    }
}

/// Point with hyperboloid coordinates `(x1, x2)`.
pub fn lift(x: f64, y: f64) -> Lorentz {
    [(1.0 + x * x + y * y).sqrt(), x, y]
}

/// Boundary profile `r(theta)` with a local cubic interpolant between nodes.
struct Profile {
    mode: GridMode,
    h: f64,
    r: Vec<f64>,
    pts: Vec<Lorentz>,
}

impl Profile {
    fn new(state: &SurfaceState) -> Result<Self> {
        let graph = match state {
            SurfaceState::Graph(g) => g.clone(),
            SurfaceState::Support(_) => state.to_graph()?,
        };
        let pts = graph
            .grid
            .nodes
            .iter()
            .zip(&graph.r)
            .map(|(&t, &r)| hyperboloid_point(r, t))
            .collect();
        Ok(Self {
            mode: graph.grid.mode,
            h: graph.grid.h,
            r: graph.r.clone(),
            pts,
        })
    }

    /// Valid support states always have a radial graph; this is for callers without a `Result`.
    fn of(state: &SurfaceState) -> Self {
        Self::new(state).expect("valid surface states convert to radial graphs")
    }

    /// `r` at node index `i`, extended periodically or by even reflection at the poles.
    fn r_at(&self, i: isize) -> f64 {
        let m = self.r.len() as isize;
        match self.mode {
            GridMode::FullCircle => self.r[i.rem_euclid(m) as usize],
            GridMode::Axisymmetric => {
                let period = 2 * (m - 1);
                let k = i.rem_euclid(period);
                self.r[(if k < m { k } else { period - k }) as usize]
            }
        }
    }

    fn point(&self, theta: f64) -> Lorentz {
        hyperboloid_point(self.radius(theta), theta)
    }

    fn radius(&self, theta: f64) -> f64 {
        let x = theta / self.h;
        let i = x.floor() as isize;
        let t = x - i as f64;
        let (a, b, c, d) = (self.r_at(i - 1), self.r_at(i), self.r_at(i + 1), self.r_at(i + 2));
        // four-point Lagrange interpolation on nodes -1, 0, 1, 2
        -a * t * (t - 1.0) * (t - 2.0) / 6.0 + b * (t + 1.0) * (t - 1.0) * (t - 2.0) / 2.0
            - c * (t + 1.0) * t * (t - 2.0) / 2.0
            + d * (t + 1.0) * t * (t - 1.0) / 6.0
    }

    /// Whether `c` lies inside the (star-shaped) body.
    fn contains(&self, c: &Lorentz) -> bool {
        let rho = c[0].max(1.0).acosh();
        let theta = match self.mode {
            GridMode::FullCircle => c[2].atan2(c[1]).rem_euclid(std::f64::consts::TAU),
            GridMode::Axisymmetric => c[2].abs().atan2(c[1]),
        };
        rho <= self.radius(theta)
    }

    /// Objective minimized by the inball search: minus the clearance inside, plus it outside.
    fn clearance_loss(&self, c: &Lorentz) -> f64 {
        let d = min_dist(self, c);
        if self.contains(c) {
            -d
        } else {
            d
        }
    }

    /// Extreme distance from `c` (`sign` = 1 for the minimum, -1 for the maximum),
    /// refined between the neighbours of the extreme sample.
    fn extreme(&self, c: &Lorentz, sign: f64) -> f64 {
        let (j, _) = self
            .pts
            .iter()
            .enumerate()
            .map(|(j, p)| (j, sign * distance(p, c)))
            .min_by(|a, b| a.1.total_cmp(&b.1))
            .expect("non-empty boundary");
        let t0 = j as f64 * self.h;
        let f = |t: f64| sign * distance(&self.point(t), c);
        let t = golden(f, t0 - self.h, t0 + self.h, 1e-10 * self.h);
        sign * f(t).min(sign * distance(&self.pts[j], c))
    }
}

fn max_dist(p: &Profile, c: &Lorentz) -> f64 {
    p.extreme(c, -1.0)
}

fn min_dist(p: &Profile, c: &Lorentz) -> f64 {
    p.extreme(c, 1.0)
}

/// Golden-section minimization of a unimodal function on `[a, b]`.
fn golden(f: impl Fn(f64) -> f64, mut a: f64, mut b: f64, tol: f64) -> f64 {
    let g = 0.5 * (5f64.sqrt() - 1.0);
    let mut c = b - g * (b - a);
    let mut d = a + g * (b - a);
    let (mut fc, mut fd) = (f(c), f(d));
    while b - a > tol {
        if fc <= fd {
            b = d;
            d = c;
            fd = fc;
            c = b - g * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + g * (b - a);
            fd = f(d);
        }
    }
    0.5 * (a + b)
}

/// Sample the axis, then refine around the best sample.
fn axis_search(f: impl Fn(f64) -> f64, extent: f64) -> f64 {
    let h = 2.0 * extent / (AXIS_SAMPLES - 1) as f64;
    let best = (0..AXIS_SAMPLES)
        .map(|i| -extent + i as f64 * h)
        .min_by(|a, b| f(*a).total_cmp(&f(*b)))
        .unwrap_or(0.0);
    golden(&f, best - h, best + h, SEARCH_TOL)
}

/// Coarse grid followed by a zooming 5x5 stencil in the plane.
fn plane_search(f: impl Fn(f64, f64) -> f64, extent: f64) -> (f64, f64) {
    const COARSE: usize = 17;
    let h = 2.0 * extent / (COARSE - 1) as f64;
    let mut best = (0.0, 0.0, f(0.0, 0.0));
    for i in 0..COARSE {
        for j in 0..COARSE {
            let (x, y) = (-extent + i as f64 * h, -extent + j as f64 * h);
            let v = f(x, y);
            if v < best.2 {
                best = (x, y, v);
            }
        }
    }
    let mut step = h;
    while step > SEARCH_TOL {
        let (cx, cy) = (best.0, best.1);
        for i in -2i32..=2 {
            for j in -2i32..=2 {
                let (x, y) = (cx + i as f64 * step, cy + j as f64 * step);
                let v = f(x, y);
                if v < best.2 {
                    best = (x, y, v);
                }
            }
        }
        step *= 0.5;
    }
    (best.0, best.1)
}

/// Center and radius of the largest enclosed ball.
pub fn inball(state: &SurfaceState) -> (Lorentz, f64) {
    let pts = Profile::of(state);
    let extent = pts.pts.iter().map(|p| p[0]).fold(1.0, f64::max).acosh();
    let center = match state.grid().mode {
        GridMode::Axisymmetric => {
            let a = axis_search(|a| pts.clearance_loss(&on_axis(a)), extent);
            on_axis(a)
        }
        GridMode::FullCircle => {
            let (x, y) = plane_search(|x, y| pts.clearance_loss(&lift(x, y)), extent.sinh());
            lift(x, y)
        }
    };
    (center, min_dist(&pts, &center))
}

/// Point at signed distance `a` from the model center along the axis.
pub fn on_axis(a: f64) -> Lorentz {
    [a.cosh(), a.sinh(), 0.0]
}

pub fn radii(state: &SurfaceState) -> Result<Radii> {
    let pts = Profile::new(state)?;
    let extent = pts.pts.iter().map(|p| p[0]).fold(1.0, f64::max).acosh();
    let (inball_center, outball_center) = match state.grid().mode {
        GridMode::Axisymmetric => {
            let a_out = axis_search(|a| max_dist(&pts, &on_axis(a)), extent);
            let a_in = axis_search(|a| pts.clearance_loss(&on_axis(a)), extent);
            (on_axis(a_in), on_axis(a_out))
        }
        GridMode::FullCircle => {
            let ext = extent.sinh();
            let (xo, yo) = plane_search(|x, y| max_dist(&pts, &lift(x, y)), ext);
            let (xi, yi) = plane_search(|x, y| pts.clearance_loss(&lift(x, y)), ext);
            (lift(xi, yi), lift(xo, yo))
        }
    };
    Ok(Radii {
        rho_minus: min_dist(&pts, &inball_center),
        rho_plus: max_dist(&pts, &outball_center),
        inball_center,
        outball_center,
    })
}

/// Largest distance from `center` to the interpolated boundary.
pub fn max_distance_from(state: &SurfaceState, center: &Lorentz) -> f64 {
    max_dist(&Profile::of(state), center)
}

/// Smallest distance from `center` to the interpolated boundary.
pub fn min_distance_from(state: &SurfaceState, center: &Lorentz) -> f64 {
    min_dist(&Profile::of(state), center)
}
