//! Closed-form steady-state amplitudes and the independent linear-solve oracle.
//!
//! With the Laplace variable `x = iδ'` the amplitudes solve
//! `K(x) 𝒜 = ψ(0)`, `K = x·1 + diag(Γ1/2, Γ2/2, Γ3/2, 0) + iH`, where `H` is the
//! Hermitian coupling matrix of the chain. The closed forms below are the
//! entries of the adjugate of `K`; `det K` is the monic characteristic quartic.

use crate::linalg::{self, LinalgError};
use crate::math::{Complex64, I, ZERO};
use crate::model::D2System;
use crate::poly::{Poly, Ring};

use super::{quartic, Branch, SpectrumError};

/// Relative `|D|` threshold at which a grid point is treated as a pole; the
/// scale is `Σ |c_k| max(1, |δ'|)^k`.
pub const POLE_HIT_TOLERANCE: f64 = 1e-12;

/// Adjugate row of `K` for decaying state `branch`, multiplied into the initial
/// amplitudes `(A1, A2, A3, B)`.
pub(crate) fn numerator<T: Ring>(
    branch: Branch,
    x: T,
    gamma: [f64; 3],
    rabi: [Complex64; 4],
    init: [Complex64; 4],
) -> T {
    let [o1, o2, o3, o4] = rabi;
    let s1 = o1.norm_sqr();
    let s2 = o2.norm_sqr();
    let s3 = o3.norm_sqr();
    let s4 = o4.norm_sqr();
    let g1 = x + Complex64::new(0.5 * gamma[0], 0.0);
    let g2 = x + Complex64::new(0.5 * gamma[1], 0.0);
    let g3 = x + Complex64::new(0.5 * gamma[2], 0.0);
    let re = |v: f64| Complex64::new(v, 0.0);
    let [a1, a2, a3, b] = init;

    match branch {
        Branch::One => {
            let t_a1 = x * g2 * g3 + g2 * re(s4) + x * re(s3);
            let t_a2 = (x * g3 + re(s4)) * (-I * o2) + I * o1 * o3.conj() * o4.conj();
            let t_a3 = -(g2 * (o1 * o4.conj())) - x * (o2 * o3);
            let t_b = -((g2 * g3 + re(s3)) * (I * o1)) + I * o2 * o3 * o4;
            t_a1 * a1 + t_a2 * a2 + t_a3 * a3 + t_b * b
        }
        Branch::Two => {
            let t_a1 = (x * g3 + re(s4)) * (-I * o2.conj()) + I * o1.conj() * o3 * o4;
            let t_a2 = x * g1 * g3 + g3 * re(s1) + g1 * re(s4);
            let t_a3 = (x * g1 + re(s1)) * (-I * o3) + I * o1 * o2.conj() * o4.conj();
            let t_b = -(g1 * (o3 * o4) + g3 * (o1 * o2.conj()));
            t_a1 * a1 + t_a2 * a2 + t_a3 * a3 + t_b * b
        }
        Branch::Three => {
            let t_a1 = -(g2 * (o4 * o1.conj())) - x * (o2.conj() * o3.conj());
            let t_a2 = (x * g1 + re(s1)) * (-I * o3.conj()) + I * o1.conj() * o2 * o4;
            let t_a3 = x * g1 * g2 + g2 * re(s1) + x * re(s2);
            let t_b = -((g1 * g2 + re(s2)) * (I * o4)) + I * o1 * o2.conj() * o3.conj();
            t_a1 * a1 + t_a2 * a2 + t_a3 * a3 + t_b * b
        }
    }
}

/// Numerator of one branch as a polynomial in `δ'`.
pub(crate) fn numerator_poly(sys: &D2System, branch: Branch) -> Poly {
    numerator(
        branch,
        Poly::var(),
        sys.gamma,
        sys.rabi(),
        sys.initial.amplitudes(),
    )
    .scale_var(I)
}

/// Closed-form amplitude of one branch at the reporting detuning `delta`.
pub fn branch_amplitude(sys: &D2System, branch: Branch, delta: f64) -> Result<Complex64, SpectrumError> {
    if !sys.analytic_admissible() {
        return Err(SpectrumError::NotAnalyticAdmissible);
    }
    let coeffs = quartic::quartic_coefficients(sys.gamma, sys.rabi());
    closed_form(sys, &coeffs, branch, delta)
}

pub(crate) fn closed_form(
    sys: &D2System,
    coeffs: &[Complex64; 5],
    branch: Branch,
    delta: f64,
) -> Result<Complex64, SpectrumError> {
    let dp = delta + branch.shift(sys);
    let z = Complex64::new(dp, 0.0);
    let d = coeffs.iter().fold(ZERO, |acc, &c| acc * z + c);
    let r = dp.abs().max(1.0);
    let scale = coeffs.iter().fold(0.0, |acc, c| acc * r + c.norm());
    if d.norm() <= POLE_HIT_TOLERANCE * scale {
        return Err(SpectrumError::PoleHit { delta });
    }
    let n = numerator(
        branch,
        I * dp,
        sys.gamma,
        sys.rabi(),
        sys.initial.amplitudes(),
    );
    Ok(n / d)
}

/// Closed-form amplitudes `(𝒜1, 𝒜2, 𝒜3)`, each at its shifted argument.
pub fn steady_state_amplitudes(sys: &D2System, delta: f64) -> Result<[Complex64; 3], SpectrumError> {
    if !sys.analytic_admissible() {
        return Err(SpectrumError::NotAnalyticAdmissible);
    }
    let coeffs = quartic::quartic_coefficients(sys.gamma, sys.rabi());
    Ok([
        closed_form(sys, &coeffs, Branch::One, delta)?,
        closed_form(sys, &coeffs, Branch::Two, delta)?,
        closed_form(sys, &coeffs, Branch::Three, delta)?,
    ])
}

/// The Laplace matrix `K(x)`.
pub(crate) fn laplace_matrix(x: Complex64, gamma: [f64; 3], rabi: [Complex64; 4]) -> [[Complex64; 4]; 4] {
    let [o1, o2, o3, o4] = rabi;
    let mut h = [[ZERO; 4]; 4];
    h[0][1] = o2;
    h[1][2] = o3;
    h[0][3] = o1;
    h[2][3] = o4;
    for r in 0..4 {
        for c in 0..r {
            h[r][c] = h[c][r].conj();
        }
    }
    let mut k = [[ZERO; 4]; 4];
    for r in 0..4 {
        for c in 0..4 {
            k[r][c] = I * h[r][c];
        }
        k[r][r] += x;
        if r < 3 {
            k[r][r] += 0.5 * gamma[r];
        }
    }
    k
}

/// Amplitudes by a direct pivoted solve of `K 𝒜 = ψ(0)`, one solve per branch
/// argument; shares nothing with the closed forms.
pub fn laplace_solve_oracle(sys: &D2System, delta: f64) -> Result<[Complex64; 3], SpectrumError> {
    if !sys.analytic_admissible() {
        return Err(SpectrumError::NotAnalyticAdmissible);
    }
    let init = sys.initial.amplitudes();
    let rabi = sys.rabi();
    let mut out = [ZERO; 3];
    for branch in Branch::ALL {
        let x = I * (delta + branch.shift(sys));
        let k = laplace_matrix(x, sys.gamma, rabi);
        let sol = linalg::solve(k, init).map_err(|e| match e {
            LinalgError::Singular { .. } | LinalgError::NoConvergence => {
                SpectrumError::SingularSystem { delta }
            }
        })?;
        out[branch.index()] = sol[branch.index()];
    }
    Ok(out)
}
