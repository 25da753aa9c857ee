//! Filon-type quadrature of `∫ e^{−iωt} f(t) dt` on a uniform grid, with `f`
//! replaced by its cubic Hermite interpolant (values and derivatives at the
//! nodes) and the oscillatory factor integrated exactly.

use crate::math::{Complex64, I, ONE, ZERO};

/// Below this `|θ|` the moments come from their power series.
const SERIES_THRESHOLD: f64 = 1.0;

/// `μ_k = ∫₀¹ u^k e^{−iθu} du` for `k = 0..=3`, complex `θ` allowed.
pub fn moments(theta: Complex64) -> [Complex64; 4] {
    if theta.norm() < SERIES_THRESHOLD {
        // Σ_m (−iθ)^m / (m! (k + m + 1)); 24 terms reach 1/24! ≈ 1.6e-24.
        let z = -I * theta;
        let mut out = [ZERO; 4];
        let mut term = ONE;
        for m in 0..24 {
            for (k, o) in out.iter_mut().enumerate() {
                *o += term / (k + m + 1) as f64;
            }
            term = term * z / (m + 1) as f64;
        }
        out
    } else {
        let e = (-I * theta).exp();
        let it = I * theta;
        let mut out = [ZERO; 4];
        out[0] = (ONE - e) / it;
        for k in 1..4 {
            out[k] = -e / it + out[k - 1] * (k as f64) / it;
        }
        out
    }
}

/// Weights `(w0, w1, w2, w3)` such that
/// `∫_{t_j}^{t_j+h} e^{−iω(t−t_j)} f dt ≈ w0 f_j + w1 f'_j + w2 f_{j+1} + w3 f'_{j+1}`.
pub fn weights(omega: Complex64, h: f64) -> [Complex64; 4] {
    let [m0, m1, m2, m3] = moments(omega * h);
    [
        (m3 * 2.0 - m2 * 3.0 + m0) * h,
        (m3 - m2 * 2.0 + m1) * (h * h),
        (m2 * 3.0 - m3 * 2.0) * h,
        (m3 - m2) * (h * h),
    ]
}

/// `∫_{t0}^{t0+(n−1)h} e^{−iωt} f(t) dt` from node values and derivatives.
///
/// The phase factor is advanced by multiplication and resynchronized with an
/// exact evaluation every 256 nodes.
pub fn integrate(
    omega: Complex64,
    t0: f64,
    h: f64,
    values: impl Iterator<Item = (Complex64, Complex64)>,
) -> Complex64 {
    let w = weights(omega, h);
    let step = (-I * omega * h).exp();
    let mut phase = (-I * omega * t0).exp();
    let mut acc = ZERO;
    let mut prev: Option<(Complex64, Complex64)> = None;
    for (j, (f, df)) in values.enumerate() {
        if let Some((pf, pdf)) = prev {
            acc += phase * (w[0] * pf + w[1] * pdf + w[2] * f + w[3] * df);
            if j % 256 == 0 {
                phase = (-I * omega * (t0 + j as f64 * h)).exp();
            } else {
                phase *= step;
            }
        }
        prev = Some((f, df));
    }
    acc
}
