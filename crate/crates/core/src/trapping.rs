//! Trapping conditions.
//!
//! * Field-generated coherence: the central-branch `B(0)` numerator
//!   `(iδ + Γ1/2) Ω3Ω4 + (iδ + Γ3/2) Ω1Ω2*` vanishes for every `δ` iff
//!   `Ω3Ω4 + Ω1Ω2* = 0` and `Γ1 = Γ3`, i.e. `|Ω3||Ω4| = |Ω1||Ω2|` and
//!   `φ2 + φ3 + φ4 − φ1 ≡ π (mod 2π)`.
//! * Spontaneously generated coherence would need the constant term `c0` of
//!   the characteristic quartic to vanish, which positive decay rates forbid.

use core::f64::consts::PI;
use core::fmt;

use crate::math::{self, Complex64, I, ZERO};
use crate::model::{self, D1System, D2System, DriveField, ModelError};
use crate::spectrum::quartic;

/// Default relative tolerance of the residual checks.
pub const DEFAULT_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq)]
pub enum TrappingError {
    /// `|Ω3| = 0` leaves `|Ω4|` undetermined.
    DivisionByZeroDrive,
    InvalidField(ModelError),
    InvalidSystem(alloc::vec::Vec<ModelError>),
}

impl fmt::Display for TrappingError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::DivisionByZeroDrive => {
                write!(f, "cannot solve for |Omega4|: |Omega3| is zero")
            }
            Self::InvalidField(e) => write!(f, "invalid drive: {e}"),
            Self::InvalidSystem(errs) => {
                write!(f, "invalid system:")?;
                for e in errs {
                    write!(f, " {e};")?;
                }
                Ok(())
            }
        }
    }
}

impl core::error::Error for TrappingError {}

#[derive(Debug, Clone, PartialEq)]
pub struct TrappingReport {
    /// Coefficient of `iδ` in the central numerator: `Ω3Ω4 + Ω1Ω2*`.
    pub delta_coefficient_residual: Complex64,
    /// `δ`-independent part: `Γ1/2 Ω3Ω4 + Γ3/2 Ω1Ω2*`.
    pub constant_residual: Complex64,
    /// `|Ω3||Ω4| − |Ω1||Ω2|`.
    pub magnitude_condition: f64,
    /// `φ2 + φ3 + φ4 − φ1 − π` wrapped into `(−π, π]`.
    pub phase_condition: f64,
    /// `Γ1 − Γ3`.
    pub gamma_condition: f64,
    pub satisfied: bool,
    /// Completed drives when a solve was requested.
    pub solved_fields: Option<[DriveField; 4]>,
}

/// Constant term `c0` of the characteristic quartic.
pub fn sgc_constant_term(sys: &D2System) -> Complex64 {
    quartic::quartic_coefficients(sys.gamma, sys.rabi())[4]
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SgcVerdict {
    pub feasible: bool,
    /// No drives at all: `c0 = 0` says nothing about coherence.
    pub trivial: bool,
    pub constant_term: Complex64,
    /// Lower bound of `Re c0`:
    /// `Γ1Γ2/4 |Ω4|² + Γ2Γ3/4 |Ω1|² + (|Ω2Ω4| − |Ω1Ω3|)²`.
    pub witness: f64,
}

/// Whether the constant term can vanish, with a positivity witness.
pub fn sgc_feasible(sys: &D2System) -> SgcVerdict {
    let c0 = sgc_constant_term(sys);
    let m: [f64; 4] = core::array::from_fn(|i| sys.drives[i].magnitude());
    let [g1, g2, g3] = sys.gamma;
    let gap = m[1] * m[3] - m[0] * m[2];
    let witness = 0.25 * g1 * g2 * m[3] * m[3] + 0.25 * g2 * g3 * m[0] * m[0] + gap * gap;
    let trivial = m.iter().all(|&v| v == 0.0);
    // `Re c0 ≥ witness`, so only a vanishing witness leaves room for `c0 = 0`;
    // the rounding of `c0` itself cannot decide this when `Γ` is tiny.
    let scale = math::powi((m[1] * m[3]).max(m[0] * m[2]), 2).max(f64::MIN_POSITIVE);
    let vanishes = witness == 0.0 && c0.norm() <= 1e-12 * scale;
    SgcVerdict {
        feasible: !trivial && vanishes && sys.gamma.iter().all(|&g| g > 0.0),
        trivial,
        constant_term: c0,
        witness,
    }
}

/// Central-branch `B(0)` numerator `(iδ + Γ1/2) Ω3Ω4 + (iδ + Γ3/2) Ω1Ω2*`.
pub fn fgc_central_numerator(sys: &D2System, delta: f64) -> Complex64 {
    let [o1, o2, o3, o4] = sys.rabi();
    let x = I * delta;
    (x + 0.5 * sys.gamma[0]) * (o3 * o4) + (x + 0.5 * sys.gamma[2]) * (o1 * o2.conj())
}

fn report(sys: &D2System) -> (TrappingReport, f64) {
    let [o1, o2, o3, o4] = sys.rabi();
    let d = &sys.drives;
    let p34 = d[2].magnitude() * d[3].magnitude();
    let p12 = d[0].magnitude() * d[1].magnitude();
    let scale = p34.max(p12);
    let phase_condition = if scale == 0.0 {
        0.0
    } else {
        math::wrap_phase(d[1].phase() + d[2].phase() + d[3].phase() - d[0].phase() - PI)
    };
    let rep = TrappingReport {
        delta_coefficient_residual: o3 * o4 + o1 * o2.conj(),
        constant_residual: (o3 * o4) * (0.5 * sys.gamma[0]) + (o1 * o2.conj()) * (0.5 * sys.gamma[2]),
        magnitude_condition: p34 - p12,
        phase_condition,
        gamma_condition: sys.gamma[0] - sys.gamma[2],
        satisfied: false,
        solved_fields: None,
    };
    (rep, scale)
}

/// Evaluates the central-branch trapping condition.
///
/// Satisfied iff `|magnitude_condition| ≤ tol·scale`, `|phase_condition| ≤ tol`
/// and `|gamma_condition| ≤ tol`, with `scale` the larger drive product.
pub fn fgc_check(sys: &D2System, tol: f64) -> TrappingReport {
    let (mut rep, scale) = report(sys);
    rep.satisfied = rep.magnitude_condition.abs() <= tol * scale
        && rep.phase_condition.abs() <= tol
        && rep.gamma_condition.abs() <= tol;
    rep
}

/// Completes `|Ω4| = |Ω1||Ω2|/|Ω3|` and `φ3 = π − φ2` with `Ω1`, `Ω4` real.
pub fn fgc_solve(mag1: f64, mag2: f64, mag3: f64, phase2: f64) -> Result<[DriveField; 4], TrappingError> {
    if mag3 == 0.0 {
        return Err(TrappingError::DivisionByZeroDrive);
    }
    let f = |m, p| DriveField::new(m, p).map_err(TrappingError::InvalidField);
    Ok([
        f(mag1, 0.0)?,
        f(mag2, phase2)?,
        f(mag3, PI - phase2)?,
        f(mag1 * mag2 / mag3, 0.0)?,
    ])
}

/// Completes `Ω_m2 = −Ω_o1 Ω_m1 / Ω_o2*` so that the D1 condition holds.
pub fn d1_solve(o1: DriveField, o2: DriveField, m1: DriveField) -> Result<DriveField, TrappingError> {
    if o2.magnitude() == 0.0 {
        return Err(TrappingError::DivisionByZeroDrive);
    }
    DriveField::new(
        o1.magnitude() * m1.magnitude() / o2.magnitude(),
        math::normalize_phase(PI + o1.phase() + m1.phase() + o2.phase()),
    )
    .map_err(TrappingError::InvalidField)
}

/// D1 darkening condition `Ω_o1 Ω_m1 + Ω_m2 Ω_o2* = 0`.
///
/// Satisfied iff the modulus of the sum is at most `tol` times the larger of
/// the two products.
pub fn d1_trapping_check(sys: &D1System, tol: f64) -> Result<TrappingReport, TrappingError> {
    let chain = model::d1_to_chain(sys).map_err(TrappingError::InvalidSystem)?;
    let (mut rep, scale) = report(&chain);
    rep.constant_residual = ZERO;
    rep.satisfied = rep.delta_coefficient_residual.norm() <= tol * scale;
    Ok(rep)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::preset::{preset, PresetSystem};
    use core::f64::consts::FRAC_PI_2;

    fn d2(name: &str) -> D2System {
        match preset(name).unwrap().system {
            PresetSystem::D2(s) => s,
            PresetSystem::D1(_) => panic!("expected a D2 preset"),
        }
    }

    fn d1(name: &str) -> D1System {
        match preset(name).unwrap().system {
            PresetSystem::D1(s) => s,
            PresetSystem::D2(_) => panic!("expected a D1 preset"),
        }
    }

    #[test]
    fn d1_solve_darkens_the_loop() {
        let mut sys = d1("d1-fig3a");
        sys.microwave[1] = d1_solve(sys.optical[0], sys.optical[1], sys.microwave[0]).unwrap();
        assert!(d1_trapping_check(&sys, 1e-12).unwrap().satisfied);
        let trap = d1("d1-trapping");
        let m2 = d1_solve(trap.optical[0], trap.optical[1], trap.microwave[0]).unwrap();
        assert!((m2.rabi() - trap.microwave[1].rabi()).norm() < 1e-15);
        assert_eq!(
            d1_solve(trap.optical[0], DriveField::OFF, trap.microwave[0]),
            Err(TrappingError::DivisionByZeroDrive)
        );
    }

    #[test]
    fn undriven_constant_term_is_zero_and_trivial() {
        let v = sgc_feasible(&d2("two-level"));
        assert_eq!(v.constant_term, ZERO);
        assert!(v.trivial && !v.feasible);
    }

    #[test]
    fn trapping_phases_give_real_positive_constant_term() {
        let c0 = sgc_constant_term(&d2("fig2-trapping"));
        assert!(c0.im.abs() < 1e-14 && c0.re > 0.0);
        let c0 = sgc_constant_term(&d2("fig2-notrapping"));
        assert!(c0.norm() > 0.1);
    }

    #[test]
    fn vanishing_middle_rate_keeps_witness_positive() {
        let mut sys = d2("fig2-notrapping");
        sys.gamma[1] = 1e-300;
        let v = sgc_feasible(&sys);
        assert!(!v.feasible);
        assert!(v.witness > 0.0 && v.constant_term.re >= v.witness - 1e-12);
    }

    #[test]
    fn central_numerator_vanishes_at_trapping() {
        let sys = d2("fig2-trapping");
        for delta in [-30.0, -1.0, 0.0, 2.5, 17.0] {
            assert!(fgc_central_numerator(&sys, delta).norm() < 1e-14);
        }
    }

    #[test]
    fn central_numerator_symmetric_case() {
        let m = 1.3;
        let one = DriveField::real(m).unwrap();
        let sys = D2System::resonant([1.0; 3], 13.0, [one; 4]);
        for delta in [-2.0, 0.0, 0.7] {
            let expected = Complex64::new(0.5, delta) * (2.0 * m * m);
            assert!((fgc_central_numerator(&sys, delta) - expected).norm() < 1e-14);
        }
    }

    #[test]
    fn central_numerator_isolates_rate_mismatch() {
        let mut sys = d2("fig2-trapping");
        sys.gamma = [1.0, 1.0, 2.0];
        let v = fgc_central_numerator(&sys, 0.0);
        assert!((v.norm() - 0.5 * 2.0).abs() < 1e-14);
    }

    #[test]
    fn fig2_presets_report_as_expected() {
        let r = fgc_check(&d2("fig2-trapping"), DEFAULT_TOLERANCE);
        assert!(r.satisfied);
        let r = fgc_check(&d2("fig2-notrapping"), DEFAULT_TOLERANCE);
        assert!(!r.satisfied);
        assert!((r.phase_condition - PI).abs() < 1e-12);
        let mut sys = d2("fig2-trapping");
        sys.gamma = [1.0, 1.0, 2.0];
        let r = fgc_check(&sys, DEFAULT_TOLERANCE);
        assert!(!r.satisfied && r.gamma_condition == -1.0);
    }

    #[test]
    fn solve_completes_drives() {
        let f = fgc_solve(2.0, 1.0, 1.0, PI).unwrap();
        assert_eq!(f[3].magnitude(), 2.0);
        assert!(f[2].phase().abs() < 1e-15);
        let f = fgc_solve(1.0, 1.0, 1.0, 0.0).unwrap();
        assert_eq!(f[3].magnitude(), 1.0);
        assert!((f[2].phase() - PI).abs() < 1e-15);
        assert_eq!(fgc_solve(1.0, 1.0, 0.0, 0.3), Err(TrappingError::DivisionByZeroDrive));
    }

    #[test]
    fn d1_conditions() {
        assert!(d1_trapping_check(&d1("d1-trapping"), DEFAULT_TOLERANCE).unwrap().satisfied);
        assert!(d1_trapping_check(&d1("d1-fig3f"), DEFAULT_TOLERANCE).unwrap().satisfied);
        let r = d1_trapping_check(&d1("d1-fig3a"), DEFAULT_TOLERANCE).unwrap();
        assert!(!r.satisfied);
        let mut sys = d1("d1-trapping");
        sys.optical[0] = DriveField::OFF;
        assert!(!d1_trapping_check(&sys, DEFAULT_TOLERANCE).unwrap().satisfied);
        sys.optical[0] = DriveField::new(1.0, FRAC_PI_2).unwrap();
        assert!(!d1_trapping_check(&sys, DEFAULT_TOLERANCE).unwrap().satisfied);
    }
}
