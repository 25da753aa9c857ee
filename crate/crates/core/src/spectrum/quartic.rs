//! The characteristic quartic and its roots.

use crate::linalg;
use crate::math::{Complex64, I, ONE, ZERO};
use crate::model::D2System;
use crate::poly::Poly;

use super::{Branch, SpectrumError};

/// Roots closer than this (relative to `max(1, |z|)`) are reported as repeated.
pub const MULTIPLICITY_DISTANCE: f64 = 1e-7;

/// Newton merge threshold: a cluster is collapsed to one repeated root when
/// every lower derivative vanishes to this relative size.
const CLUSTER_DERIVATIVE_TOLERANCE: f64 = 1e-9;

/// Monic quartic `D(δ') = δ'^4 + c3 δ'^3 + … + c0` in the branch-shifted
/// detuning `δ' = δ + shift`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuarticPoly {
    /// `[c4, c3, c2, c1, c0]`, descending degree, `c4 = 1`.
    pub coefficients: [Complex64; 5],
    /// Offset added to the reporting detuning to obtain `δ'`.
    pub shift: f64,
}

impl QuarticPoly {
    pub fn new(coefficients: [Complex64; 5], shift: f64) -> Self {
        Self {
            coefficients,
            shift,
        }
    }

    /// Ascending-coefficient polynomial in `δ'`.
    pub fn poly(&self) -> Poly {
        let mut p = Poly::ZERO;
        for (k, v) in self.coefficients.iter().rev().enumerate() {
            p.c[k] = *v;
        }
        p
    }

    /// `D(δ')`.
    pub fn eval(&self, delta_shifted: f64) -> Complex64 {
        self.poly().eval(Complex64::new(delta_shifted, 0.0))
    }

    pub fn constant_term(&self) -> Complex64 {
        self.coefficients[4]
    }

    /// Rounding scale of an evaluation at `δ'`.
    pub fn scale_at(&self, delta_shifted: f64) -> f64 {
        self.poly().eval_abs(delta_shifted.abs())
    }

    pub fn max_coefficient(&self) -> f64 {
        self.coefficients.iter().map(|c| c.norm()).fold(0.0, f64::max)
    }
}

/// Coefficients of the determinant of the Laplace matrix of the chain.
///
/// The constant term is real for every drive configuration; the last two of its
/// terms combine to `−2 Re(Ω1* Ω2 Ω3 Ω4)`.
pub fn quartic_coefficients(gamma: [f64; 3], rabi: [Complex64; 4]) -> [Complex64; 5] {
    let [g1, g2, g3] = gamma;
    let [o1, o2, o3, o4] = rabi;
    let s: [f64; 4] = [o1.norm_sqr(), o2.norm_sqr(), o3.norm_sqr(), o4.norm_sqr()];
    let c3 = -I * (0.5 * (g1 + g2 + g3));
    let c2 = Complex64::new(-0.25 * (g1 * g2 + g1 * g3 + g2 * g3) - s.iter().sum::<f64>(), 0.0);
    let c1 = I
        * (g1 * g2 * g3 / 8.0
            + 0.5 * (g1 + g2) * s[3]
            + 0.5 * g1 * s[2]
            + 0.5 * g3 * s[1]
            + 0.5 * (g2 + g3) * s[0]);
    let c0 = Complex64::new(
        0.25 * g1 * g2 * s[3] + 0.25 * g2 * g3 * s[0] + s[1] * s[3] + s[0] * s[2],
        0.0,
    ) - o1.conj() * o2 * o3 * o4
        - o1 * o2.conj() * o3.conj() * o4.conj();
    [ONE, c3, c2, c1, c0]
}

/// Characteristic quartic of one emission branch.
pub fn characteristic_quartic(sys: &D2System, branch: Branch) -> Result<QuarticPoly, SpectrumError> {
    if !sys.analytic_admissible() {
        return Err(SpectrumError::NotAnalyticAdmissible);
    }
    Ok(QuarticPoly::new(
        quartic_coefficients(sys.gamma, sys.rabi()),
        branch.shift(sys),
    ))
}

/// Four roots of a monic quartic with their multiplicities.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuarticRoots {
    pub roots: [Complex64; 4],
    /// Number of roots (including itself) within [`MULTIPLICITY_DISTANCE`].
    pub multiplicity: [usize; 4],
}

impl QuarticRoots {
    /// Largest residual `|p(z)|` over the roots.
    pub fn max_residual(&self, p: &QuarticPoly) -> f64 {
        let poly = p.poly();
        self.roots
            .iter()
            .map(|&z| poly.eval(z).norm())
            .fold(0.0, f64::max)
    }

    /// Largest `|p(z)| / Σ |c_k| |z|^k` over the roots.
    pub fn max_relative_residual(&self, p: &QuarticPoly) -> f64 {
        let poly = p.poly();
        self.roots
            .iter()
            .map(|&z| {
                let scale = poly.eval_abs(z.norm());
                if scale == 0.0 {
                    0.0
                } else {
                    poly.eval(z).norm() / scale
                }
            })
            .fold(0.0, f64::max)
    }
}

/// Roots of a monic quartic: companion-matrix eigenvalues, cluster merging
/// and two guarded Newton steps per simple root.
pub fn quartic_roots(p: &QuarticPoly) -> QuarticRoots {
    let poly = p.poly();
    let coeffs = &p.coefficients;
    let mut companion = [[ZERO; 4]; 4];
    for k in 0..4 {
        companion[0][k] = -coeffs[k + 1] / coeffs[0];
    }
    for k in 1..4 {
        companion[k][k - 1] = ONE;
    }
    let mut roots = match linalg::hessenberg_eigenvalues(companion) {
        Ok(r) => r,
        Err(_) => aberth_fallback(&poly),
    };

    merge_clusters(&poly, &mut roots);

    let mut multiplicity = [1usize; 4];
    for i in 0..4 {
        multiplicity[i] = (0..4)
            .filter(|&j| {
                (roots[i] - roots[j]).norm() <= MULTIPLICITY_DISTANCE * roots[i].norm().max(1.0)
            })
            .count();
    }
    for i in 0..4 {
        if multiplicity[i] == 1 {
            roots[i] = newton_polish(&poly, roots[i], 2);
        }
    }
    roots.sort_by(|a, b| a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im)));
    for i in 0..4 {
        multiplicity[i] = (0..4)
            .filter(|&j| {
                (roots[i] - roots[j]).norm() <= MULTIPLICITY_DISTANCE * roots[i].norm().max(1.0)
            })
            .count();
    }
    QuarticRoots {
        roots,
        multiplicity,
    }
}

/// Newton steps that are only accepted while the residual decreases.
fn newton_polish(poly: &Poly, mut z: Complex64, steps: usize) -> Complex64 {
    let d = poly.derivative();
    let mut res = poly.eval(z).norm();
    for _ in 0..steps {
        let dp = d.eval(z);
        if dp == ZERO || res == 0.0 {
            break;
        }
        let cand = z - poly.eval(z) / dp;
        let cand_res = poly.eval(cand).norm();
        if cand_res < res {
            z = cand;
            res = cand_res;
        } else {
            break;
        }
    }
    z
}

/// Collapses groups of roots that are numerically one repeated root.
///
/// Eigenvalues of a repeated root scatter by `ε^{1/m}`; the centroid is far
/// more accurate, and Newton on `p^{(m−1)}` refines it. The merge is accepted
/// only if every lower derivative vanishes at the refined point.
fn merge_clusters(poly: &Poly, roots: &mut [Complex64; 4]) {
    let scale = roots.iter().map(|z| z.norm()).fold(1.0, f64::max);
    let radius = 1e-2 * scale;
    let mut done = [false; 4];
    for i in 0..4 {
        if done[i] {
            continue;
        }
        let mut members: [usize; 4] = [i, 0, 0, 0];
        let mut m = 1;
        for j in i + 1..4 {
            if !done[j] && (roots[j] - roots[i]).norm() <= radius {
                members[m] = j;
                m += 1;
            }
        }
        if m == 1 {
            continue;
        }
        // Try the whole group, then smaller multiplicities around the centroid.
        for mult in (2..=m).rev() {
            let centroid = members[..mult]
                .iter()
                .fold(ZERO, |acc, &k| acc + roots[k])
                / mult as f64;
            let mut deriv = *poly;
            for _ in 0..mult - 1 {
                deriv = deriv.derivative();
            }
            let z = newton_polish_plain(&deriv, centroid, 4);
            if is_root_of_order(poly, z, mult) {
                for &k in &members[..mult] {
                    roots[k] = z;
                    done[k] = true;
                }
                break;
            }
        }
    }
}

fn newton_polish_plain(poly: &Poly, mut z: Complex64, steps: usize) -> Complex64 {
    let d = poly.derivative();
    for _ in 0..steps {
        let dp = d.eval(z);
        if dp == ZERO {
            break;
        }
        let step = poly.eval(z) / dp;
        z -= step;
        if step.norm() <= f64::EPSILON * z.norm().max(1.0) {
            break;
        }
    }
    z
}

fn is_root_of_order(poly: &Poly, z: Complex64, order: usize) -> bool {
    let r = z.norm();
    let mut d = *poly;
    for _ in 0..order {
        let v = d.eval(z).norm();
        let s = d.eval_abs(r);
        if v > CLUSTER_DERIVATIVE_TOLERANCE * s.max(f64::MIN_POSITIVE) {
            return false;
        }
        d = d.derivative();
    }
    true
}

/// Simultaneous Aberth iteration, used only if QR fails to deflate.
fn aberth_fallback(poly: &Poly) -> [Complex64; 4] {
    let d = poly.derivative();
    let radius = 1.0 + poly.c[..4].iter().map(|c| c.norm()).fold(0.0, f64::max);
    let mut z: [Complex64; 4] = core::array::from_fn(|k| {
        crate::math::cis(0.4 + k as f64 * core::f64::consts::FRAC_PI_2) * (0.5 * radius)
    });
    for _ in 0..500 {
        let mut moved = 0.0f64;
        for i in 0..4 {
            let pv = poly.eval(z[i]);
            let dv = d.eval(z[i]);
            if pv == ZERO {
                continue;
            }
            let ratio = pv / dv;
            let sum = (0..4)
                .filter(|&j| j != i)
                .fold(ZERO, |acc, j| acc + ONE / (z[i] - z[j]));
            let w = ratio / (ONE - ratio * sum);
            z[i] -= w;
            moved = moved.max(w.norm());
        }
        if moved <= 1e-15 * radius {
            break;
        }
    }
    z
}
