//! Builtin initial shapes, addressed by strings such as
//! `perturbed_circle(r0=1, eps=0.1, m=2)`.

use std::collections::BTreeMap;
use std::f64::consts::PI;
use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::hsurface::grid::{Grid, GridMode};
use crate::hsurface::klein::{hyperboloid_point, Lorentz};
use crate::hsurface::radial::RadialGraphState;
use crate::quad::zonal_harmonic;

const FIELD: &str = "initial.shape";

/// A parsed shape name with its parameters.
#[derive(Debug, Clone, PartialEq)]
pub struct ShapeSpec {
    pub name: String,
    pub params: BTreeMap<String, f64>,
}

/// Parameter names, in positional order, with defaults.
fn signature(name: &str) -> Option<&'static [(&'static str, f64)]> {
    Some(match name {
        "sphere" | "circle" => &[("r0", 1.0)],
        "perturbed_circle" | "perturbed_sphere" | "perturbed" => &[("r0", 1.0), ("eps", 0.1), ("m", 2.0)],
        "mixed" | "mixed_circle" => &[("r0", 1.0), ("eps", 0.01), ("m1", 2.0), ("m2", 3.0)],
        "shifted" => &[("r0", 1.0), ("d", 0.2), ("eps", 0.0), ("m", 2.0)],
        "horo_contact" => &[("r0", 1.0), ("m", 2.0)],
        "random_circle" => &[("r0", 1.0), ("amp", 0.02), ("modes", 6.0)],
        _ => return None,
    })
}

impl ShapeSpec {
    pub fn parse(text: &str) -> Result<Self> {
        let text = text.trim();
        let (name, args) = match text.find('(') {
            Some(i) => {
                let rest = text[i + 1..]
                    .strip_suffix(')')
                    .ok_or_else(|| Error::config(FIELD, format!("missing `)` in `{text}`")))?;
                (text[..i].trim(), rest)
            }
            None => (text, ""),
        };
        let sig = signature(name).ok_or_else(|| Error::config(FIELD, format!("unknown shape `{name}`")))?;
        let mut params: BTreeMap<String, f64> = sig.iter().map(|(k, v)| (k.to_string(), *v)).collect();
        for (pos, arg) in args.split(',').map(str::trim).filter(|a| !a.is_empty()).enumerate() {
            let (key, value) = match arg.split_once('=') {
                Some((k, v)) => (k.trim().to_string(), v.trim()),
                None => {
                    let key = sig
                        .get(pos)
                        .ok_or_else(|| Error::config(FIELD, format!("too many arguments for `{name}`")))?;
                    (key.0.to_string(), arg)
                }
            };
            if !params.contains_key(&key) {
                return Err(Error::config(FIELD, format!("`{name}` has no parameter `{key}`")));
            }
            let v: f64 = value
                .parse()
                .map_err(|_| Error::config(FIELD, format!("parameter `{key}` is not a number: `{value}`")))?;
            params.insert(key, v);
        }
        Ok(Self {
            name: name.to_string(),
            params,
        })
    }

    fn get(&self, key: &str) -> f64 {
        self.params[key]
    }

    fn index(&self, key: &str) -> Result<usize> {
        let v = self.get(key);
        if v < 0.0 || v.fract() != 0.0 {
            return Err(Error::config(FIELD, format!("`{key}` must be a non-negative integer")));
        }
        Ok(v as usize)
    }

    pub fn build(&self, grid: Arc<Grid>, seed: u64) -> Result<RadialGraphState> {
        let r0 = self.get("r0");
        if !(r0 > 0.0) {
            return Err(Error::config(FIELD, "r0 must be positive"));
        }
        let mode = grid.mode;
        let g = grid.clone();
        let check_mode = |want: GridMode| {
            if mode == want {
                Ok(())
            } else {
                Err(Error::config(FIELD, format!("`{}` requires a {} grid", self.name, want.as_str())))
            }
        };
        match self.name.as_str() {
            "sphere" | "circle" => RadialGraphState::sphere(grid, r0),
            "perturbed_circle" | "perturbed_sphere" | "perturbed" => {
                if self.name == "perturbed_circle" {
                    check_mode(GridMode::FullCircle)?;
                } else if self.name == "perturbed_sphere" {
                    check_mode(GridMode::Axisymmetric)?;
                }
                let (eps, m) = (self.get("eps"), self.index("m")?);
                RadialGraphState::from_fn(grid, |t| r0 + eps * harmonic(&g, m, t))
            }
            "mixed" | "mixed_circle" => {
                let (eps, m1, m2) = (self.get("eps"), self.index("m1")?, self.index("m2")?);
                RadialGraphState::from_fn(grid, |t| r0 + eps * (harmonic(&g, m1, t) + harmonic(&g, m2, t)))
            }
            "shifted" => {
                let (d, eps, m) = (self.get("d"), self.get("eps"), self.index("m")?);
                shifted(grid, d, |t| r0 + eps * harmonic(&g, m, t))
            }
            "horo_contact" => horo_contact(grid, r0, self.index("m")?),
            "random_circle" => {
                check_mode(GridMode::FullCircle)?;
                let (amp, modes) = (self.get("amp"), self.index("modes")?);
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                let coeffs: Vec<(f64, f64)> = (2..=modes.max(2))
                    .map(|m| {
                        let s = amp / (m * m) as f64 * 4.0;
                        (s * rng.gen_range(-1.0..1.0), s * rng.gen_range(-1.0..1.0))
                    })
                    .collect();
                RadialGraphState::from_fn(grid, |t| {
                    r0 + coeffs
                        .iter()
                        .enumerate()
                        .map(|(i, (a, b))| {
                            let m = (i + 2) as f64;
                            a * (m * t).cos() + b * (m * t).sin()
                        })
                        .sum::<f64>()
                })
            }
            _ => unreachable!("signature() accepted the name"),
        }
    }
}

/// Build a builtin shape from its textual name.
pub fn build_shape(text: &str, grid: Arc<Grid>, seed: u64) -> Result<RadialGraphState> {
    ShapeSpec::parse(text)?.build(grid, seed)
}

/// `cos(m theta)` on full circles, the zonal harmonic of degree `m` otherwise
/// (`P_m(cos theta)` on `S^2`).
pub fn harmonic(grid: &Grid, m: usize, theta: f64) -> f64 {
    match grid.mode {
        GridMode::FullCircle => (m as f64 * theta).cos(),
        GridMode::Axisymmetric => zonal_harmonic(grid.n, m, theta),
    }
}

/// Translate along the first axis by hyperbolic distance `d`.
pub fn boost(x: &Lorentz, d: f64) -> Lorentz {
    let (c, s) = (d.cosh(), d.sinh());
    [c * x[0] + s * x[1], s * x[0] + c * x[1], x[2]]
}

/// The body with polar profile `base` about the model center, moved by `d`
/// along the first axis and re-sampled as a radial graph about the center.
pub fn shifted(grid: Arc<Grid>, d: f64, base: impl Fn(f64) -> f64) -> Result<RadialGraphState> {
    let miss = |r: f64, theta: f64| {
        let z = boost(&hyperboloid_point(r, theta), -d);
        let rr = z[0].max(1.0).acosh();
        rr - base(z[2].atan2(z[1]))
    };
    let mut r = Vec::with_capacity(grid.len());
    for &theta in &grid.nodes {
        let (mut lo, mut hi) = (1e-12, 1.0);
        if miss(lo, theta) >= 0.0 {
            return Err(Error::config(FIELD, "shifted body does not contain the model center"));
        }
        while miss(hi, theta) < 0.0 {
            hi *= 2.0;
            if hi > 50.0 {
                return Err(Error::config(FIELD, "shifted body is unbounded"));
            }
        }
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if miss(mid, theta) < 0.0 {
                lo = mid;
            } else {
                hi = mid;
            }
            if hi - lo < 1e-15 {
                break;
            }
        }
        r.push(0.5 * (lo + hi));
    }
    RadialGraphState::new(grid, r)
}

/// Perturbation `r0 + eps h_m` with the amplitude chosen so that the smallest
/// discrete principal curvature equals 1 (tangential horosphere contact).
pub fn horo_contact(grid: Arc<Grid>, r0: f64, m: usize) -> Result<RadialGraphState> {
    let g = grid.clone();
    let min_kappa = |eps: f64| -> Result<f64> {
        let st = RadialGraphState::from_fn(grid.clone(), |t| r0 + eps * harmonic(&g, m, t))?;
        Ok(st.geometry()?.min_kappa())
    };
    let mut hi = 0.05 * r0;
    while min_kappa(hi)? > 1.0 {
        hi *= 1.5;
        if hi > r0 {
            return Err(Error::config(FIELD, "no horosphere contact amplitude found"));
        }
    }
    let mut lo = 0.0;
    for _ in 0..80 {
        let mid = 0.5 * (lo + hi);
        if min_kappa(mid)? > 1.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    // the lower end keeps min kappa >= 1 up to rounding
    let eps = lo;
    let st = RadialGraphState::from_fn(grid, |t| r0 + eps * harmonic(&g, m, t))?;
    debug_assert!(st.r.iter().all(|&r| r > 0.0) && eps < PI);
    Ok(st)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_named_and_positional_arguments() {
        let a = ShapeSpec::parse("perturbed_circle(r0=1, eps=0.1, m=2)").unwrap();
        let b = ShapeSpec::parse("perturbed_circle(1, 0.1, 2)").unwrap();
        assert_eq!(a, b);
        assert_eq!(ShapeSpec::parse("sphere").unwrap().params["r0"], 1.0);
        assert!(ShapeSpec::parse("blob(1)").is_err());
        assert!(ShapeSpec::parse("sphere(q=1)").is_err());
    }

    #[test]
    fn shifted_circle_has_exact_radius() {
        let grid = Grid::new(1, GridMode::FullCircle, 64).unwrap();
        let st = shifted(grid, 0.3, |_| 0.8).unwrap();
        let c = boost(&[1.0, 0.0, 0.0], 0.3);
        for (j, &r) in st.r.iter().enumerate() {
            let x = hyperboloid_point(r, st.grid.nodes[j]);
            let dist = crate::hsurface::klein::distance(&x, &c);
            assert!((dist - 0.8).abs() < 1e-12);
        }
    }

    #[test]
    fn horo_contact_touches_one() {
        let grid = Grid::new(1, GridMode::FullCircle, 64).unwrap();
        let st = horo_contact(grid, 1.0, 2).unwrap();
        let k = st.geometry().unwrap().min_kappa();
        assert!(k >= 1.0 && k - 1.0 < 1e-12, "{k}");
    }

    #[test]
    fn random_shape_is_seeded() {
        let grid = Grid::new(1, GridMode::FullCircle, 32).unwrap();
        let a = build_shape("random_circle", grid.clone(), 7).unwrap();
        let b = build_shape("random_circle", grid.clone(), 7).unwrap();
        let c = build_shape("random_circle", grid, 8).unwrap();
        assert_eq!(a, b);
        assert_ne!(a, c);
    }
}
