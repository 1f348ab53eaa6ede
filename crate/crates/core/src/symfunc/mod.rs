//! Admissible speed functions `f` of the principal curvatures and their calculus.
//!
//! Every shipped kind is symmetric, homogeneous of degree one, strictly
//! increasing on the positive cone and normalized by `f(1,...,1) = 1`. The
//! flow speed is `Psi = f^alpha`.

mod admissible;
pub mod elementary;

use std::fmt;
use std::str::FromStr;

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};

pub use admissible::{
    check_admissible, default_samples, AdmissibilityReport, BoundaryProbe, ConditionSummary, DEFAULT_TOL,
    SampleCheck,
};

/// Relative gap below which two curvatures count as repeated.
pub const DEGENERATE_REL_GAP: f64 = 1e-8;

const GEOMETRIC_EPS: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq)]
pub enum SpeedKind {
    /// `E_k^{1/k}` with `E_k` the normalized k-th elementary symmetric function.
    ElemSymRoot { k: usize },
    /// `(mean x_i^r)^{1/r}`; `r = 0` is the geometric mean.
    PowerMean { r: f64 },
    /// `base1^sigma * base2^(1 - sigma)`.
    Product {
        base1: Box<SpeedKind>,
        base2: Box<SpeedKind>,
        sigma: f64,
    },
}

impl SpeedKind {
    /// Inverse concavity (`f_*` concave) for the shipped families.
    pub fn is_inverse_concave(&self) -> bool {
        match self {
            SpeedKind::ElemSymRoot { .. } => true,
            SpeedKind::PowerMean { r } => *r >= -1.0,
            SpeedKind::Product { base1, base2, .. } => {
                base1.is_inverse_concave() && base2.is_inverse_concave()
            }
        }
    }

    /// Whether the kind satisfies the full set of speed assumptions.
    pub fn is_admissible(&self) -> bool {
        match self {
            SpeedKind::ElemSymRoot { .. } => true,
            SpeedKind::PowerMean { r } => *r >= 0.0,
            SpeedKind::Product { base1, base2, .. } => {
                base1.is_inverse_concave() && base2.is_admissible()
            }
        }
    }

    fn validate(&self, n: usize, path: &str) -> Result<()> {
        match self {
            SpeedKind::ElemSymRoot { k } => {
                if *k == 0 || *k > n {
                    return Err(Error::config(path, format!("Ek_root needs 1 <= k <= n={n}, got {k}")));
                }
            }
            SpeedKind::PowerMean { r } => {
                if !r.is_finite() {
                    return Err(Error::config(path, "power_mean exponent must be finite"));
                }
            }
            SpeedKind::Product { base1, base2, sigma } => {
                if !(*sigma > 0.0 && *sigma < 1.0) {
                    return Err(Error::config(path, format!("product sigma must lie in (0,1), got {sigma}")));
                }
                base1.validate(n, path)?;
                base2.validate(n, path)?;
            }
        }
        Ok(())
    }
}

impl fmt::Display for SpeedKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SpeedKind::ElemSymRoot { k } => write!(f, "Ek_root({k})"),
            SpeedKind::PowerMean { r } => write!(f, "power_mean({r})"),
            SpeedKind::Product { base1, base2, sigma } => {
                write!(f, "product({base1},{base2},{sigma})")
            }
        }
    }
}

impl FromStr for SpeedKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let mut p = NameParser { src: s.as_bytes(), pos: 0 };
        let kind = p.kind().map_err(|_| Error::UnknownSpeed(s.to_string()))?;
        p.ws();
        if p.pos != p.src.len() {
            return Err(Error::UnknownSpeed(s.to_string()));
        }
        Ok(kind)
    }
}

struct NameParser<'a> {
    src: &'a [u8],
    pos: usize,
}

impl NameParser<'_> {
    fn ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn eat(&mut self, c: u8) -> std::result::Result<(), ()> {
        self.ws();
        if self.src.get(self.pos) == Some(&c) {
            self.pos += 1;
            Ok(())
        } else {
            Err(())
        }
    }

    fn ident(&mut self) -> &str {
        self.ws();
        let start = self.pos;
        while self.pos < self.src.len()
            && (self.src[self.pos].is_ascii_alphanumeric() || self.src[self.pos] == b'_')
        {
            self.pos += 1;
        }
        std::str::from_utf8(&self.src[start..self.pos]).unwrap_or("")
    }

    fn number(&mut self) -> std::result::Result<f64, ()> {
        self.ws();
        let start = self.pos;
        while self.pos < self.src.len()
            && matches!(self.src[self.pos], b'0'..=b'9' | b'.' | b'-' | b'+' | b'e' | b'E')
        {
            self.pos += 1;
        }
        std::str::from_utf8(&self.src[start..self.pos])
            .map_err(|_| ())?
            .parse()
            .map_err(|_| ())
    }

    fn kind(&mut self) -> std::result::Result<SpeedKind, ()> {
        let name = self.ident().to_ascii_lowercase();
        self.eat(b'(')?;
        let kind = match name.as_str() {
            "ek_root" => {
                let k = self.number()?;
                if k < 1.0 || k.fract() != 0.0 {
                    return Err(());
                }
                SpeedKind::ElemSymRoot { k: k as usize }
            }
            "power_mean" => SpeedKind::PowerMean { r: self.number()? },
            "product" => {
                let base1 = self.kind()?;
                self.eat(b',')?;
                let base2 = self.kind()?;
                self.eat(b',')?;
                let sigma = self.number()?;
                SpeedKind::Product {
                    base1: Box::new(base1),
                    base2: Box::new(base2),
                    sigma,
                }
            }
            _ => return Err(()),
        };
        self.eat(b')')?;
        Ok(kind)
    }
}

/// A speed function on `n` principal curvatures together with its power `alpha`.
#[derive(Debug, Clone, PartialEq)]
pub struct SpeedFunction {
    pub kind: SpeedKind,
    pub n: usize,
    pub alpha: f64,
}

/// Value, gradient, Hessian and the off-diagonal quotient matrix of `f`.
#[derive(Debug, Clone)]
pub struct DerivativeBundle {
    pub value: f64,
    pub grad: DVector<f64>,
    pub hess: DMatrix<f64>,
    /// `(fdot_i - fdot_k) / (kappa_i - kappa_k)`, with the repeated-value limit
    /// `fddot_ii - fddot_ik`. Diagonal entries carry the same limit.
    pub off_diag: DMatrix<f64>,
}

impl SpeedFunction {
    /// Build a speed function that satisfies the flow assumptions.
    pub fn new(kind: SpeedKind, n: usize, alpha: f64) -> Result<Self> {
        let f = Self::new_unchecked(kind, n, alpha)?;
        if let SpeedKind::Product { base1, base2, .. } = &f.kind {
            if !base1.is_inverse_concave() {
                return Err(Error::config("speed.name", "product base1 must be inverse concave"));
            }
            if !base2.is_admissible() {
                return Err(Error::config("speed.name", "product base2 must be admissible"));
            }
        }
        if !f.kind.is_admissible() {
            return Err(Error::config(
                "speed.name",
                format!("{} does not satisfy the speed assumptions", f.kind),
            ));
        }
        Ok(f)
    }

    /// Build without the admissibility gate (used to probe test functions).
    pub fn new_unchecked(kind: SpeedKind, n: usize, alpha: f64) -> Result<Self> {
        if n == 0 {
            return Err(Error::config("n", "dimension must be positive"));
        }
        if !(alpha > 0.0 && alpha.is_finite()) {
            return Err(Error::config("speed.alpha", format!("alpha must be positive, got {alpha}")));
        }
        kind.validate(n, "speed.name")?;
        Ok(Self { kind, n, alpha })
    }

    pub fn parse(name: &str, n: usize, alpha: f64) -> Result<Self> {
        Self::new(name.parse()?, n, alpha)
    }

    pub fn name(&self) -> String {
        self.kind.to_string()
    }

    fn check(&self, kappa: &[f64]) -> Result<()> {
        if kappa.len() != self.n {
            return Err(Error::DimensionMismatch {
                expected: self.n,
                got: kappa.len(),
            });
        }
        if kappa.iter().any(|&k| !(k > 0.0 && k.is_finite())) {
            return Err(Error::Domain(kappa.to_vec()));
        }
        Ok(())
    }

    /// `f(kappa)`.
    pub fn eval(&self, kappa: &[f64]) -> Result<f64> {
        self.check(kappa)?;
        Ok(value(&self.kind, kappa))
    }

    /// `f_*(z) = 1 / f(1/z)`.
    pub fn eval_dual(&self, z: &[f64]) -> Result<f64> {
        self.check(z)?;
        let inv: Vec<f64> = z.iter().map(|x| 1.0 / x).collect();
        Ok(1.0 / value(&self.kind, &inv))
    }

    /// Gradient of `f` only.
    pub fn gradient(&self, kappa: &[f64]) -> Result<(f64, Vec<f64>)> {
        self.check(kappa)?;
        let (f, g, _) = full(&self.kind, kappa, false);
        Ok((f, g))
    }

    pub fn derivatives(&self, kappa: &[f64]) -> Result<DerivativeBundle> {
        self.check(kappa)?;
        let n = kappa.len();
        let (f, g, h) = full(&self.kind, kappa, true);
        let hess = h.expect("hessian requested");
        let kmax = kappa.iter().cloned().fold(0.0, f64::max);
        let off_diag = DMatrix::from_fn(n, n, |i, k| {
            if i != k && (kappa[i] - kappa[k]).abs() >= DEGENERATE_REL_GAP * kmax {
                (g[i] - g[k]) / (kappa[i] - kappa[k])
            } else {
                hess[(i, i)] - hess[(i, k)]
            }
        });
        Ok(DerivativeBundle {
            value: f,
            grad: DVector::from_vec(g),
            hess,
            off_diag,
        })
    }

    /// `Psi = f^alpha` (no domain check; the caller guarantees positivity).
    #[inline]
    pub fn psi_unchecked(&self, kappa: &[f64]) -> f64 {
        let f = value(&self.kind, kappa);
        if self.alpha == 1.0 {
            f
        } else {
            f.powf(self.alpha)
        }
    }

    /// `Psi = f^alpha` and its gradient `alpha f^{alpha-1} fdot`.
    pub fn psi_and_dpsi(&self, kappa: &[f64]) -> Result<(f64, Vec<f64>)> {
        let (f, g) = self.gradient(kappa)?;
        let c = self.alpha * f.powf(self.alpha - 1.0);
        Ok((f.powf(self.alpha), g.into_iter().map(|x| c * x).collect()))
    }
}

fn value(kind: &SpeedKind, x: &[f64]) -> f64 {
    let n = x.len();
    match kind {
        SpeedKind::ElemSymRoot { k } => {
            let e = elementary::e_k(x, *k);
            match k {
                1 => e,
                2 => e.sqrt(),
                _ => e.powf(1.0 / *k as f64),
            }
        }
        SpeedKind::PowerMean { r } => {
            if r.abs() < GEOMETRIC_EPS {
                (x.iter().map(|v| v.ln()).sum::<f64>() / n as f64).exp()
            } else if *r == 1.0 {
                x.iter().sum::<f64>() / n as f64
            } else {
                (x.iter().map(|v| v.powf(*r)).sum::<f64>() / n as f64).powf(1.0 / r)
            }
        }
        SpeedKind::Product { base1, base2, sigma } => {
            value(base1, x).powf(*sigma) * value(base2, x).powf(1.0 - sigma)
        }
    }
}

fn full(kind: &SpeedKind, x: &[f64], want_hess: bool) -> (f64, Vec<f64>, Option<DMatrix<f64>>) {
    let n = x.len();
    match kind {
        SpeedKind::ElemSymRoot { k } => {
            let k = *k;
            let c = elementary::binomial(n, k);
            let e = elementary::sigma_without(x, k, &[]) / c;
            let f = e.powf(1.0 / k as f64);
            let ei: Vec<f64> = (0..n)
                .map(|i| {
                    if k == 0 {
                        0.0
                    } else {
                        elementary::sigma_without(x, k - 1, &[i]) / c
                    }
                })
                .collect();
            let kf = k as f64;
            let grad: Vec<f64> = ei.iter().map(|v| f * v / (kf * e)).collect();
            let hess = want_hess.then(|| {
                DMatrix::from_fn(n, n, |i, j| {
                    let eij = if i == j || k < 2 {
                        0.0
                    } else {
                        elementary::sigma_without(x, k - 2, &[i, j]) / c
                    };
                    f / (kf * e) * eij + (1.0 - kf) / (kf * kf) * f / (e * e) * ei[i] * ei[j]
                })
            });
            (f, grad, hess)
        }
        SpeedKind::PowerMean { r } => {
            let f = value(kind, x);
            let r = if r.abs() < GEOMETRIC_EPS { 0.0 } else { *r };
            let scale = f.powf(1.0 - r) / n as f64;
            let grad: Vec<f64> = x.iter().map(|v| scale * v.powf(r - 1.0)).collect();
            let hess = want_hess.then(|| {
                DMatrix::from_fn(n, n, |i, j| {
                    let mut h = (1.0 - r) * grad[i] * grad[j] / f;
                    if i == j {
                        h += (r - 1.0) * grad[i] / x[i];
                    }
                    h
                })
            });
            (f, grad, hess)
        }
        SpeedKind::Product { base1, base2, sigma } => {
            let s = *sigma;
            let (g1, d1, h1) = full(base1, x, want_hess);
            let (g2, d2, h2) = full(base2, x, want_hess);
            let f = g1.powf(s) * g2.powf(1.0 - s);
            let l: Vec<f64> = (0..n)
                .map(|i| s * d1[i] / g1 + (1.0 - s) * d2[i] / g2)
                .collect();
            let grad: Vec<f64> = l.iter().map(|li| f * li).collect();
            let hess = want_hess.then(|| {
                let (h1, h2) = (h1.unwrap(), h2.unwrap());
                DMatrix::from_fn(n, n, |i, j| {
                    f * (l[i] * l[j]
                        + s * (h1[(i, j)] / g1 - d1[i] * d1[j] / (g1 * g1))
                        + (1.0 - s) * (h2[(i, j)] / g2 - d2[i] * d2[j] / (g2 * g2)))
                })
            });
            (f, grad, hess)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sf(name: &str, n: usize) -> SpeedFunction {
        SpeedFunction::new_unchecked(name.parse().unwrap(), n, 1.0).unwrap()
    }

    #[test]
    fn spec_values() {
        assert!((sf("Ek_root(2)", 3).eval(&[1.0, 1.0, 1.0]).unwrap() - 1.0).abs() < 1e-15);
        assert!((sf("Ek_root(1)", 3).eval(&[1.0, 2.0, 3.0]).unwrap() - 2.0).abs() < 1e-15);
        let pm = sf("power_mean(2)", 2).eval(&[3.0, 4.0]).unwrap();
        assert!((pm - 12.5f64.sqrt()).abs() < 1e-14);
    }

    #[test]
    fn dual_values() {
        let e1 = sf("Ek_root(1)", 2);
        assert!((e1.eval_dual(&[1.0, 2.0]).unwrap() - 4.0 / 3.0).abs() < 1e-15);
        assert!((e1.eval_dual(&[1.0, 1.0]).unwrap() - 1.0).abs() < 1e-15);
        let mut prev = f64::INFINITY;
        for t in [1e-2, 1e-4, 1e-6] {
            let v = e1.eval_dual(&[t, 1.0]).unwrap();
            assert!(v < prev && v < 3.0 * t);
            prev = v;
        }
    }

    #[test]
    fn gradient_examples() {
        let b = sf("Ek_root(1)", 4).derivatives(&[0.5, 1.0, 2.0, 7.0]).unwrap();
        for g in b.grad.iter() {
            assert!((g - 0.25).abs() < 1e-15);
        }
        let b = sf("Ek_root(2)", 2).derivatives(&[1.0, 2.0]).unwrap();
        assert!((b.value - 2f64.sqrt()).abs() < 1e-15);
        assert!((b.grad[0] - 2f64.sqrt() / 2.0).abs() < 1e-15);
    }

    #[test]
    fn psi_examples() {
        let f = SpeedFunction::new("Ek_root(1)".parse().unwrap(), 2, 2.0).unwrap();
        let (psi, d) = f.psi_and_dpsi(&[1.0, 3.0]).unwrap();
        assert!((psi - 4.0).abs() < 1e-14);
        assert!((d[0] - 2.0).abs() < 1e-14 && (d[1] - 2.0).abs() < 1e-14);
        let f = SpeedFunction::new("Ek_root(1)".parse().unwrap(), 3, 0.5).unwrap();
        let (psi, d) = f.psi_and_dpsi(&[1.0; 3]).unwrap();
        assert!((psi - 1.0).abs() < 1e-15);
        assert!(d.iter().all(|x| (x - 0.5 / 3.0).abs() < 1e-15));
    }

    #[test]
    fn domain_errors() {
        let f = sf("Ek_root(1)", 2);
        assert!(matches!(f.eval(&[1.0, 0.0]), Err(Error::Domain(_))));
        assert!(matches!(f.eval(&[1.0, -2.0]), Err(Error::Domain(_))));
        assert!(matches!(f.eval(&[1.0]), Err(Error::DimensionMismatch { .. })));
    }

    #[test]
    fn degenerate_spectrum_uses_limit() {
        let f = sf("Ek_root(2)", 3);
        let k = [1.3, 1.3, 2.0];
        let b = f.derivatives(&k).unwrap();
        let expected = b.hess[(0, 0)] - b.hess[(0, 1)];
        assert_eq!(b.off_diag[(0, 1)], expected);
        let near = f.derivatives(&[1.3 + 1e-4, 1.3, 2.0]).unwrap();
        assert!((near.off_diag[(0, 1)] - expected).abs() < 1e-3);
    }

    #[test]
    fn parse_round_trip() {
        for name in ["Ek_root(3)", "power_mean(0.5)", "product(power_mean(0),Ek_root(2),0.25)"] {
            let k: SpeedKind = name.parse().unwrap();
            assert_eq!(k.to_string(), name);
        }
        assert!(matches!("bogus(1)".parse::<SpeedKind>(), Err(Error::UnknownSpeed(_))));
        assert!("Ek_root(1.5)".parse::<SpeedKind>().is_err());
    }

    #[test]
    fn load_time_validation() {
        assert!(SpeedFunction::parse("Ek_root(3)", 2, 1.0).is_err());
        assert!(SpeedFunction::parse("power_mean(-2)", 2, 1.0).is_err());
        assert!(SpeedFunction::parse("product(power_mean(-3),Ek_root(1),0.5)", 2, 1.0).is_err());
        assert!(SpeedFunction::parse("product(power_mean(-0.5),Ek_root(1),0.5)", 2, 1.0).is_ok());
        assert!(SpeedFunction::parse("product(Ek_root(1),Ek_root(2),1.5)", 2, 1.0).is_err());
        assert!(SpeedFunction::parse("Ek_root(1)", 2, 0.0).is_err());
    }
}
