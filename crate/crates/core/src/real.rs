//! Scalars that can be pushed through the discrete geometry.
//!
//! The radial scheme needs exact directional derivatives of the discrete
//! quermassintegrals, so the node geometry is written once over [`Real`] and
//! instantiated both for `f64` and for the forward-mode [`Dual2`].

use std::ops::{Add, Div, Mul, Neg, Sub};

pub trait Real:
    Copy
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
{
    fn cst(x: f64) -> Self;
    fn re(self) -> f64;

    /// Apply a scalar function given its value and slope at `self.re()`.
    fn lift(self, value: f64, slope: f64) -> Self;

    fn scale(self, c: f64) -> Self {
        self * Self::cst(c)
    }

    fn sqrt(self) -> Self {
        let s = self.re().sqrt();
        self.lift(s, 0.5 / s)
    }

    fn sinh(self) -> Self {
        let x = self.re();
        self.lift(x.sinh(), x.cosh())
    }

    fn cosh(self) -> Self {
        let x = self.re();
        self.lift(x.cosh(), x.sinh())
    }

    fn powi(self, k: i32) -> Self {
        let x = self.re();
        if k == 0 {
            return Self::cst(1.0);
        }
        self.lift(x.powi(k), f64::from(k) * x.powi(k - 1))
    }

    fn powf(self, p: f64) -> Self {
        let x = self.re();
        self.lift(x.powf(p), p * x.powf(p - 1.0))
    }
}

impl Real for f64 {
    #[inline]
    fn cst(x: f64) -> Self {
        x
    }
    #[inline]
    fn re(self) -> f64 {
        self
    }
    #[inline]
    fn lift(self, value: f64, _slope: f64) -> Self {
        value
    }
    #[inline]
    fn scale(self, c: f64) -> Self {
        self * c
    }
    #[inline]
    fn sqrt(self) -> Self {
        f64::sqrt(self)
    }
    #[inline]
    fn sinh(self) -> Self {
        f64::sinh(self)
    }
    #[inline]
    fn cosh(self) -> Self {
        f64::cosh(self)
    }
    #[inline]
    fn powi(self, k: i32) -> Self {
        f64::powi(self, k)
    }
    #[inline]
    fn powf(self, p: f64) -> Self {
        f64::powf(self, p)
    }
}

/// Forward-mode dual number carrying two tangent directions.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Dual2 {
    pub re: f64,
    pub eps: [f64; 2],
}

impl Dual2 {
    pub fn new(re: f64, eps: [f64; 2]) -> Self {
        Self { re, eps }
    }
}

impl Add for Dual2 {
    type Output = Self;
    #[inline]
    fn add(self, o: Self) -> Self {
        Self::new(self.re + o.re, [self.eps[0] + o.eps[0], self.eps[1] + o.eps[1]])
    }
}

impl Sub for Dual2 {
    type Output = Self;
    #[inline]
    fn sub(self, o: Self) -> Self {
        Self::new(self.re - o.re, [self.eps[0] - o.eps[0], self.eps[1] - o.eps[1]])
    }
}

impl Mul for Dual2 {
    type Output = Self;
    #[inline]
    fn mul(self, o: Self) -> Self {
        Self::new(
            self.re * o.re,
            [
                self.eps[0] * o.re + self.re * o.eps[0],
                self.eps[1] * o.re + self.re * o.eps[1],
            ],
        )
    }
}

impl Div for Dual2 {
    type Output = Self;
    #[inline]
    fn div(self, o: Self) -> Self {
        let q = self.re / o.re;
        Self::new(
            q,
            [
                (self.eps[0] - q * o.eps[0]) / o.re,
                (self.eps[1] - q * o.eps[1]) / o.re,
            ],
        )
    }
}

impl Neg for Dual2 {
    type Output = Self;
    #[inline]
    fn neg(self) -> Self {
        Self::new(-self.re, [-self.eps[0], -self.eps[1]])
    }
}

impl Real for Dual2 {
    #[inline]
    fn cst(x: f64) -> Self {
        Self::new(x, [0.0, 0.0])
    }
    #[inline]
    fn re(self) -> f64 {
        self.re
    }
    #[inline]
    fn lift(self, value: f64, slope: f64) -> Self {
        Self::new(value, [slope * self.eps[0], slope * self.eps[1]])
    }
    #[inline]
    fn scale(self, c: f64) -> Self {
        Self::new(self.re * c, [self.eps[0] * c, self.eps[1] * c])
    }
}
