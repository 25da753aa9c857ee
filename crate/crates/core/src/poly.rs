//! Fixed-capacity complex polynomials of degree at most four.
//!
//! The Laplace-domain formulas are written once, generically over [`Ring`],
//! and evaluated either at a complex point or symbolically on [`Poly`] to
//! recover exact coefficients.

use core::ops::{Add, Mul, Neg, Sub};

use crate::math::{Complex64, ZERO};

/// Highest degree representable by [`Poly`].
pub const MAX_DEGREE: usize = 4;

/// Commutative ring with complex scalars.
pub trait Ring:
    Copy
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Neg<Output = Self>
    + Mul<Complex64, Output = Self>
    + Add<Complex64, Output = Self>
{
}

impl Ring for Complex64 {}

/// Polynomial with ascending coefficients `c[0] + c[1] z + … + c[4] z⁴`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Poly {
    pub c: [Complex64; MAX_DEGREE + 1],
}

impl Poly {
    pub const ZERO: Poly = Poly {
        c: [ZERO; MAX_DEGREE + 1],
    };

    /// The identity polynomial `z`.
    pub fn var() -> Self {
        let mut p = Self::ZERO;
        p.c[1] = Complex64::new(1.0, 0.0);
        p
    }

    pub fn constant(v: Complex64) -> Self {
        let mut p = Self::ZERO;
        p.c[0] = v;
        p
    }

    /// `Π (z − r)` over the given roots.
    pub fn from_roots(roots: &[Complex64]) -> Self {
        roots.iter().fold(Self::constant(Complex64::new(1.0, 0.0)), |acc, &r| {
            acc * (Self::var() + (-r))
        })
    }

    pub fn degree(&self) -> Option<usize> {
        self.c.iter().rposition(|v| *v != ZERO)
    }

    /// Horner evaluation.
    pub fn eval(&self, z: Complex64) -> Complex64 {
        self.c.iter().rev().fold(ZERO, |acc, &v| acc * z + v)
    }

    /// `Σ |c_k| r^k`, the natural rounding scale of an evaluation at `|z| = r`.
    pub fn eval_abs(&self, r: f64) -> f64 {
        self.c.iter().rev().fold(0.0, |acc, v| acc * r + v.norm())
    }

    pub fn derivative(&self) -> Self {
        let mut d = Self::ZERO;
        for k in 1..=MAX_DEGREE {
            d.c[k - 1] = self.c[k] * k as f64;
        }
        d
    }

    /// `p(a z)`.
    pub fn scale_var(&self, a: Complex64) -> Self {
        let mut out = *self;
        let mut f = Complex64::new(1.0, 0.0);
        for v in out.c.iter_mut() {
            *v *= f;
            f *= a;
        }
        out
    }

    /// Taylor coefficients `p^{(k)}(z)/k!` for `k = 0..=4`.
    pub fn taylor(&self, z: Complex64) -> [Complex64; MAX_DEGREE + 1] {
        let mut out = [ZERO; MAX_DEGREE + 1];
        let mut d = *self;
        let mut fact = 1.0;
        for (k, o) in out.iter_mut().enumerate() {
            if k > 0 {
                fact *= k as f64;
            }
            *o = d.eval(z) / fact;
            d = d.derivative();
        }
        out
    }
}

impl Add for Poly {
    type Output = Poly;
    fn add(mut self, rhs: Poly) -> Poly {
        self.c.iter_mut().zip(rhs.c).for_each(|(a, b)| *a += b);
        self
    }
}

impl Sub for Poly {
    type Output = Poly;
    fn sub(mut self, rhs: Poly) -> Poly {
        self.c.iter_mut().zip(rhs.c).for_each(|(a, b)| *a -= b);
        self
    }
}

impl Neg for Poly {
    type Output = Poly;
    fn neg(mut self) -> Poly {
        self.c.iter_mut().for_each(|a| *a = -*a);
        self
    }
}

impl Mul for Poly {
    type Output = Poly;
    fn mul(self, rhs: Poly) -> Poly {
        let mut out = Poly::ZERO;
        for (i, &a) in self.c.iter().enumerate() {
            if a == ZERO {
                continue;
            }
            for (j, &b) in rhs.c.iter().enumerate() {
                if b == ZERO {
                    continue;
                }
                assert!(i + j <= MAX_DEGREE, "polynomial degree overflow");
                out.c[i + j] += a * b;
            }
        }
        out
    }
}

impl Mul<Complex64> for Poly {
    type Output = Poly;
    fn mul(mut self, rhs: Complex64) -> Poly {
        self.c.iter_mut().for_each(|a| *a *= rhs);
        self
    }
}

impl Add<Complex64> for Poly {
    type Output = Poly;
    fn add(mut self, rhs: Complex64) -> Poly {
        self.c[0] += rhs;
        self
    }
}

impl Ring for Poly {}
