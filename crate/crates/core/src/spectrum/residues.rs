//! Partial-fraction decomposition of a branch amplitude over its quartic roots.

use alloc::vec::Vec;

use crate::math::{Complex64, ZERO};
use crate::poly::Poly;

use super::quartic::{QuarticPoly, QuarticRoots, MULTIPLICITY_DISTANCE};
use super::{PoleTerm, SpectrumError};

/// Poles with `|Im| ≤` this (relative to `max(1, |pole|)`) are undamped.
pub const TRAPPED_TOLERANCE: f64 = 1e-9;

/// Residues below this fraction of the largest one are numerically zero.
pub const NEGLIGIBLE_RESIDUE: f64 = 1e-10;

/// Decomposes `N(δ')/D(δ')` into `Σ r / (δ − pole)^order` in the reporting
/// detuning; repeated roots get confluent terms up to their multiplicity.
pub fn pole_terms(numerator: &Poly, quartic: &QuarticPoly, roots: &QuarticRoots) -> Vec<PoleTerm> {
    let d_prime = quartic.poly().derivative();
    let mut used = [false; 4];
    let mut terms = Vec::with_capacity(4);
    for i in 0..4 {
        if used[i] {
            continue;
        }
        let z = roots.roots[i];
        let group: Vec<usize> = (i..4)
            .filter(|&j| {
                !used[j]
                    && (roots.roots[j] - z).norm() <= MULTIPLICITY_DISTANCE * z.norm().max(1.0)
            })
            .collect();
        group.iter().for_each(|&j| used[j] = true);
        let m = group.len();
        let pole = z - quartic.shift;
        let trapped = z.im.abs() <= TRAPPED_TOLERANCE * z.norm().max(1.0);

        if m == 1 {
            terms.push(PoleTerm {
                pole,
                residue: numerator.eval(z) / d_prime.eval(z),
                order: 1,
                trapped,
            });
            continue;
        }
        let others: Vec<Complex64> = (0..4)
            .filter(|j| !group.contains(j))
            .map(|j| roots.roots[j])
            .collect();
        let q = Poly::from_roots(&others);
        let nt = numerator.taylor(z);
        let qt = q.taylor(z);
        let mut f = [ZERO; 4];
        for k in 0..m {
            let acc = (1..=k).fold(nt[k], |acc, j| acc - qt[j] * f[k - j]);
            f[k] = acc / qt[0];
        }
        for order in (1..=m).rev() {
            terms.push(PoleTerm {
                pole,
                residue: f[m - order],
                order,
                trapped,
            });
        }
    }
    terms
}

/// `Σ r / (δ − pole)^order`.
pub fn reconstruct(terms: &[PoleTerm], delta: f64) -> Complex64 {
    let z = Complex64::new(delta, 0.0);
    terms
        .iter()
        .fold(ZERO, |acc, t| acc + t.residue / (z - t.pole).powi(t.order as i32))
}

/// Residue-form evaluation at a point where `D` vanishes: terms whose residue
/// is numerically zero are dropped; a surviving term sitting on the point is
/// a genuine singularity.
pub fn evaluate_at_pole(terms: &[PoleTerm], delta: f64) -> Result<Complex64, SpectrumError> {
    let max_residue = terms.iter().map(|t| t.residue.norm()).fold(0.0, f64::max);
    let z = Complex64::new(delta, 0.0);
    let mut acc = ZERO;
    for t in terms {
        if t.residue.norm() <= NEGLIGIBLE_RESIDUE * max_residue || t.residue == ZERO {
            continue;
        }
        let dist = (z - t.pole).norm();
        if dist <= MULTIPLICITY_DISTANCE * t.pole.norm().max(1.0) {
            return Err(SpectrumError::PoleHit { delta });
        }
        acc += t.residue / (z - t.pole).powi(t.order as i32);
    }
    Ok(acc)
}
