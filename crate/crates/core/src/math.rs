//! Scalar helpers on top of `libm` so the crate stays `no_std`.

use core::f64::consts::{PI, TAU};

pub use num_complex::Complex64;

pub const I: Complex64 = Complex64::new(0.0, 1.0);
pub const ZERO: Complex64 = Complex64::new(0.0, 0.0);
pub const ONE: Complex64 = Complex64::new(1.0, 0.0);

#[inline]
pub fn sqrt(x: f64) -> f64 {
    libm::sqrt(x)
}

#[inline]
pub fn exp(x: f64) -> f64 {
    libm::exp(x)
}

#[inline]
pub fn ln(x: f64) -> f64 {
    libm::log(x)
}

#[inline]
pub fn powi(x: f64, n: i32) -> f64 {
    libm::pow(x, n as f64)
}

#[inline]
pub fn cis(theta: f64) -> Complex64 {
    let (s, c) = libm::sincos(theta);
    Complex64::new(c, s)
}

/// Normalizes an angle into `[0, 2π)`.
pub fn normalize_phase(phase: f64) -> f64 {
    let r = phase % TAU;
    let r = if r < 0.0 { r + TAU } else { r };
    // `r + TAU` can round up to exactly TAU for tiny negative inputs.
    if r >= TAU {
        0.0
    } else {
        r
    }
}

/// Wraps an angle into `(-π, π]`.
pub fn wrap_phase(phase: f64) -> f64 {
    let r = normalize_phase(phase);
    if r > PI {
        r - TAU
    } else {
        r
    }
}

pub fn arg(z: Complex64) -> f64 {
    libm::atan2(z.im, z.re)
}

/// `|z|` without overflow in the intermediate square.
#[inline]
pub fn abs(z: Complex64) -> f64 {
    libm::hypot(z.re, z.im)
}
