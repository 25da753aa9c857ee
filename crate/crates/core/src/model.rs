//! Scenario parameters for the driven atomic loops.
//!
//! Everything is expressed in units of a reference decay rate `Γ_ref = 1`:
//! decay rates, Rabi frequencies, splittings and detunings are plain `f64`
//! values in that unit, and times are in units of `1/Γ_ref`.
//!
//! The D2 scheme is a closed loop `B -Ω1- a1 -Ω2- a2 -Ω3- a3 -Ω4- B` with the
//! three upper levels decaying to an auxiliary ground state. The D1 scheme is
//! mapped onto the same four-amplitude chain by [`d1_to_chain`], so every
//! numerical routine in the crate works on a [`D2System`].

use alloc::vec::Vec;
use core::fmt;

use crate::math::{self, Complex64, ZERO};

/// Relative tolerance used for `ω12 == ω23` on the analytic path.
pub const SPLITTING_RELATIVE_TOLERANCE: f64 = 1e-9;

/// Tolerance on `|ψ(0)|² = 1`.
pub const NORMALIZATION_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq)]
pub enum ModelError {
    NonPositiveRate { index: usize, value: f64 },
    NonPositiveSplitting { name: &'static str, value: f64 },
    NegativeMagnitude { index: usize, value: f64 },
    UnnormalizedInitialState { norm: f64 },
    AlignmentOutOfRange { index: usize, value: f64 },
    NonFinite { what: &'static str },
    UnknownPreset(alloc::string::String),
}

impl fmt::Display for ModelError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::NonPositiveRate { index, value } => {
                write!(f, "decay rate gamma{} = {value} must be positive", index + 1)
            }
            Self::NonPositiveSplitting { name, value } => {
                write!(f, "splitting {name} = {value} must be positive")
            }
            Self::NegativeMagnitude { index, value } => {
                write!(f, "drive {} has negative magnitude {value}", index + 1)
            }
            Self::UnnormalizedInitialState { norm } => {
                write!(f, "initial state has squared norm {norm}, expected 1")
            }
            Self::AlignmentOutOfRange { index, value } => {
                write!(f, "alignment p{} = {value} is outside [-1, 1]", index + 1)
            }
            Self::NonFinite { what } => write!(f, "{what} is not finite"),
            Self::UnknownPreset(name) => write!(f, "unknown preset `{name}`"),
        }
    }
}

impl core::error::Error for ModelError {}

/// One classical drive `Ω = |Ω| e^{iφ}`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DriveField {
    magnitude: f64,
    phase: f64,
}

impl DriveField {
    pub const OFF: DriveField = DriveField {
        magnitude: 0.0,
        phase: 0.0,
    };

    /// Builds a drive; the phase is normalized into `[0, 2π)`.
    pub fn new(magnitude: f64, phase: f64) -> Result<Self, ModelError> {
        if !magnitude.is_finite() || !phase.is_finite() {
            return Err(ModelError::NonFinite { what: "drive field" });
        }
        if magnitude < 0.0 {
            return Err(ModelError::NegativeMagnitude {
                index: 0,
                value: magnitude,
            });
        }
        Ok(Self {
            magnitude,
            phase: math::normalize_phase(phase),
        })
    }

    /// A real (zero-phase) drive.
    pub fn real(magnitude: f64) -> Result<Self, ModelError> {
        Self::new(magnitude, 0.0)
    }

    pub fn magnitude(&self) -> f64 {
        self.magnitude
    }

    pub fn phase(&self) -> f64 {
        self.phase
    }

    /// The complex Rabi frequency.
    pub fn rabi(&self) -> Complex64 {
        math::cis(self.phase) * self.magnitude
    }

    pub fn with_phase(self, phase: f64) -> Self {
        Self {
            magnitude: self.magnitude,
            phase: math::normalize_phase(phase),
        }
    }

    pub fn with_magnitude(self, magnitude: f64) -> Result<Self, ModelError> {
        Self::new(magnitude, self.phase)
    }
}

/// Levels of the four-amplitude chain.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Level {
    A1,
    A2,
    A3,
    B,
}

impl Level {
    pub const ALL: [Level; 4] = [Level::A1, Level::A2, Level::A3, Level::B];

    pub fn index(self) -> usize {
        match self {
            Level::A1 => 0,
            Level::A2 => 1,
            Level::A3 => 2,
            Level::B => 3,
        }
    }
}

/// Initial amplitudes `(A1, A2, A3, B)` at `t = 0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum InitialState {
    Level(Level),
    Amplitudes([Complex64; 4]),
}

impl InitialState {
    pub fn amplitudes(&self) -> [Complex64; 4] {
        match *self {
            InitialState::Level(level) => {
                let mut v = [ZERO; 4];
                v[level.index()] = Complex64::new(1.0, 0.0);
                v
            }
            InitialState::Amplitudes(v) => v,
        }
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amplitudes().iter().map(|a| a.norm_sqr()).sum()
    }
}

/// Full parameter set of the four-amplitude chain.
///
/// Drive `i` couples: Ω1 `B↔a1`, Ω2 `a1↔a2`, Ω3 `a2↔a3`, Ω4 `a3↔B`.
#[derive(Debug, Clone, PartialEq)]
pub struct D2System {
    pub gamma: [f64; 3],
    pub omega12: f64,
    pub omega23: f64,
    pub drives: [DriveField; 4],
    pub detunings: [f64; 4],
    pub alignments: [f64; 3],
    pub initial: InitialState,
}

impl D2System {
    /// Resonant system with no alignment terms, initially in `B`.
    pub fn resonant(gamma: [f64; 3], omega12: f64, drives: [DriveField; 4]) -> Self {
        Self {
            gamma,
            omega12,
            omega23: omega12,
            drives,
            detunings: [0.0; 4],
            alignments: [0.0; 3],
            initial: InitialState::Level(Level::B),
        }
    }

    pub fn with_initial(mut self, initial: InitialState) -> Self {
        self.initial = initial;
        self
    }

    pub fn rabi(&self) -> [Complex64; 4] {
        [
            self.drives[0].rabi(),
            self.drives[1].rabi(),
            self.drives[2].rabi(),
            self.drives[3].rabi(),
        ]
    }

    /// Whether the closed-form Laplace path applies: resonant drives, no
    /// alignment terms and `ω12 = ω23`.
    pub fn analytic_admissible(&self) -> bool {
        let equal_splitting = (self.omega12 - self.omega23).abs()
            <= SPLITTING_RELATIVE_TOLERANCE * self.omega12.abs().max(self.omega23.abs());
        equal_splitting
            && self.detunings.iter().all(|&d| d == 0.0)
            && self.alignments.iter().all(|&p| p == 0.0)
    }

    /// Emission shift of each branch relative to the reporting detuning:
    /// `δ1 = δ + ω12`, `δ2 = δ`, `δ3 = δ − ω23`.
    pub fn branch_shifts(&self) -> [f64; 3] {
        [self.omega12, 0.0, -self.omega23]
    }

    /// Copy with the cross-damping alignments removed.
    pub fn without_alignments(&self) -> Self {
        let mut s = self.clone();
        s.alignments = [0.0; 3];
        s
    }

    /// Largest Rabi frequency magnitude, used to set numerical scales.
    pub fn max_drive(&self) -> f64 {
        self.drives.iter().map(|d| d.magnitude()).fold(0.0, f64::max)
    }
}

/// Outcome of [`validate_system`].
#[derive(Debug, Clone, PartialEq)]
pub struct ValidatedSystem {
    pub system: D2System,
    pub analytic_admissible: bool,
}

/// Checks every invariant of a D2 scenario and reports all violations.
pub fn validate_system(sys: &D2System) -> Result<ValidatedSystem, Vec<ModelError>> {
    let mut errors = Vec::new();
    for (index, &g) in sys.gamma.iter().enumerate() {
        if !g.is_finite() {
            errors.push(ModelError::NonFinite { what: "decay rate" });
        } else if g <= 0.0 {
            errors.push(ModelError::NonPositiveRate { index, value: g });
        }
    }
    for (name, value) in [("omega12", sys.omega12), ("omega23", sys.omega23)] {
        if !value.is_finite() {
            errors.push(ModelError::NonFinite { what: name });
        } else if value <= 0.0 {
            errors.push(ModelError::NonPositiveSplitting { name, value });
        }
    }
    check_drives(&sys.drives, &mut errors);
    if sys.detunings.iter().any(|d| !d.is_finite()) {
        errors.push(ModelError::NonFinite { what: "detuning" });
    }
    for (index, &p) in sys.alignments.iter().enumerate() {
        if !p.is_finite() {
            errors.push(ModelError::NonFinite { what: "alignment" });
        } else if p.abs() > 1.0 {
            errors.push(ModelError::AlignmentOutOfRange { index, value: p });
        }
    }
    check_initial(&sys.initial.amplitudes(), &mut errors);

    if errors.is_empty() {
        Ok(ValidatedSystem {
            system: sys.clone(),
            analytic_admissible: sys.analytic_admissible(),
        })
    } else {
        Err(errors)
    }
}

fn check_drives(drives: &[DriveField], errors: &mut Vec<ModelError>) {
    // `DriveField::new` already rejects these, but the fields are plain data
    // once constructed through `with_*` on deserialized input.
    for (index, d) in drives.iter().enumerate() {
        if !d.magnitude().is_finite() || !d.phase().is_finite() {
            errors.push(ModelError::NonFinite { what: "drive field" });
        } else if d.magnitude() < 0.0 {
            errors.push(ModelError::NegativeMagnitude {
                index,
                value: d.magnitude(),
            });
        }
    }
}

fn check_initial(amps: &[Complex64], errors: &mut Vec<ModelError>) {
    if amps.iter().any(|a| !a.re.is_finite() || !a.im.is_finite()) {
        errors.push(ModelError::NonFinite {
            what: "initial amplitude",
        });
        return;
    }
    let norm: f64 = amps.iter().map(|a| a.norm_sqr()).sum();
    if (norm - 1.0).abs() > NORMALIZATION_TOLERANCE {
        errors.push(ModelError::UnnormalizedInitialState { norm });
    }
}

/// Levels of the D1 simple-loss scheme.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum D1Level {
    G1,
    G2,
    G3,
    E,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum D1Initial {
    Level(D1Level),
    /// Amplitudes in `(g1, g2, g3, e)` order.
    Amplitudes([Complex64; 4]),
}

impl D1Initial {
    pub fn amplitudes(&self) -> [Complex64; 4] {
        match *self {
            D1Initial::Level(level) => {
                let mut v = [ZERO; 4];
                let i = match level {
                    D1Level::G1 => 0,
                    D1Level::G2 => 1,
                    D1Level::G3 => 2,
                    D1Level::E => 3,
                };
                v[i] = Complex64::new(1.0, 0.0);
                v
            }
            D1Initial::Amplitudes(v) => v,
        }
    }
}

/// Three ground states `g1, g2, g3` and one excited state `e` decaying at Γ.
///
/// Microwaves `m1`, `m2` couple `g1`, `g2` to `g3`; optical fields `o1`, `o2`
/// couple `g1`, `g2` to `e`. The trapping phases follow the convention
/// `Ω_o1 = |Ω_o1| e^{iφ3}`, `Ω_o2 = |Ω_o2| e^{iφ2}`.
#[derive(Debug, Clone, PartialEq)]
pub struct D1System {
    pub gamma: f64,
    /// `[o1, o2]`
    pub optical: [DriveField; 2],
    /// `[m1, m2]`
    pub microwave: [DriveField; 2],
    pub initial: D1Initial,
}

impl D1System {
    pub fn new(gamma: f64, optical: [DriveField; 2], microwave: [DriveField; 2]) -> Self {
        Self {
            gamma,
            optical,
            microwave,
            initial: D1Initial::Level(D1Level::G3),
        }
    }
}

pub fn validate_d1(sys: &D1System) -> Result<(), Vec<ModelError>> {
    let mut errors = Vec::new();
    if !sys.gamma.is_finite() {
        errors.push(ModelError::NonFinite { what: "decay rate" });
    } else if sys.gamma <= 0.0 {
        errors.push(ModelError::NonPositiveRate {
            index: 0,
            value: sys.gamma,
        });
    }
    let drives = [
        sys.optical[0],
        sys.optical[1],
        sys.microwave[0],
        sys.microwave[1],
    ];
    check_drives(&drives, &mut errors);
    check_initial(&sys.initial.amplitudes(), &mut errors);
    if errors.is_empty() {
        Ok(())
    } else {
        Err(errors)
    }
}

/// Maps the D1 scheme onto the four-amplitude chain.
///
/// The single decaying state takes the central slot (`a2 = e`, `Γ = (0, Γ, 0)`),
/// with `a1 = g2`, `a3 = g1`, `B = g3` and drives
/// `(Ω1, Ω2, Ω3, Ω4) = (Ω_m2, Ω_o2, Ω_o1, Ω_m1)`. The central-branch `B(0)`
/// numerator then reads `iδ(Ω_o1 Ω_m1 + Ω_m2 Ω_o2^*)`.
pub fn d1_to_chain(sys: &D1System) -> Result<D2System, Vec<ModelError>> {
    validate_d1(sys)?;
    let [g1, g2, g3, e] = sys.initial.amplitudes();
    Ok(D2System {
        gamma: [0.0, sys.gamma, 0.0],
        omega12: 0.0,
        omega23: 0.0,
        drives: [
            sys.microwave[1],
            sys.optical[1],
            sys.optical[0],
            sys.microwave[0],
        ],
        detunings: [0.0; 4],
        alignments: [0.0; 3],
        initial: InitialState::Amplitudes([g2, e, g1, g3]),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use core::f64::consts::PI;

    fn fig2_like() -> D2System {
        D2System::resonant(
            [1.0, 1.0, 1.0],
            13.0,
            [
                DriveField::real(2.0).unwrap(),
                DriveField::new(1.0, 0.0).unwrap(),
                DriveField::new(1.0, PI).unwrap(),
                DriveField::real(2.0).unwrap(),
            ],
        )
    }

    #[test]
    fn accepts_resonant_preset_parameters_as_analytic() {
        let v = validate_system(&fig2_like()).unwrap();
        assert!(v.analytic_admissible);
    }

    #[test]
    fn detuning_disables_analytic_path() {
        let mut sys = fig2_like();
        sys.detunings[0] = 0.5;
        let v = validate_system(&sys).unwrap();
        assert!(!v.analytic_admissible);
    }

    #[test]
    fn alignment_disables_analytic_path() {
        let mut sys = fig2_like();
        sys.alignments = [0.3, 0.0, 0.0];
        assert!(!validate_system(&sys).unwrap().analytic_admissible);
    }

    #[test]
    fn unequal_splitting_disables_analytic_path() {
        let mut sys = fig2_like();
        sys.omega23 = 13.5;
        assert!(!validate_system(&sys).unwrap().analytic_admissible);
    }

    #[test]
    fn rejects_zero_rate() {
        let mut sys = fig2_like();
        sys.gamma = [0.0, 1.0, 1.0];
        let errs = validate_system(&sys).unwrap_err();
        assert_eq!(
            errs,
            alloc::vec![ModelError::NonPositiveRate {
                index: 0,
                value: 0.0
            }]
        );
    }

    #[test]
    fn reports_every_violation() {
        let mut sys = fig2_like();
        sys.gamma = [-1.0, 1.0, 0.0];
        sys.alignments = [0.0, 1.5, 0.0];
        sys.initial = InitialState::Amplitudes([Complex64::new(1.0, 0.0); 4]);
        let errs = validate_system(&sys).unwrap_err();
        assert_eq!(errs.len(), 4);
        assert!(matches!(errs[3], ModelError::UnnormalizedInitialState { norm } if norm == 4.0));
    }

    #[test]
    fn drive_phase_is_normalized() {
        let d = DriveField::new(1.0, -PI / 2.0).unwrap();
        assert!((d.phase() - 1.5 * PI).abs() < 1e-15);
        assert!(DriveField::new(-1.0, 0.0).is_err());
        assert!(DriveField::new(f64::NAN, 0.0).is_err());
    }

    #[test]
    fn d1_mapping_places_decay_in_centre() {
        let one = DriveField::real(1.0).unwrap();
        let sys = D1System::new(1.0, [one, one], [one, one]);
        let chain = d1_to_chain(&sys).unwrap();
        assert_eq!(chain.gamma, [0.0, 1.0, 0.0]);
        assert_eq!(
            chain.initial.amplitudes(),
            InitialState::Level(Level::B).amplitudes()
        );
    }

    #[test]
    fn d1_mapping_routes_drives() {
        let sys = D1System::new(
            1.0,
            [
                DriveField::new(0.3, 0.1).unwrap(),
                DriveField::new(0.7, 0.2).unwrap(),
            ],
            [DriveField::real(1.1).unwrap(), DriveField::real(1.3).unwrap()],
        );
        let chain = d1_to_chain(&sys).unwrap();
        let mags: Vec<f64> = chain.drives.iter().map(|d| d.magnitude()).collect();
        assert_eq!(mags, alloc::vec![1.3, 0.7, 0.3, 1.1]);
        assert_eq!(chain.drives[1].phase(), 0.2);
        assert_eq!(chain.drives[2].phase(), 0.1);
    }
}
