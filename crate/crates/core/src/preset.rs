//! Named scenarios: limiting cases and the reference parameter sets.
//!
//! Every D2 preset uses `Γ = (1, 1, 1)` and `ω12 = ω23 = 13`, with
//! `φ1 = φ4 = 0`.

use alloc::string::ToString;
use core::f64::consts::{FRAC_PI_2, PI};

use crate::model::{
    D1Initial, D1Level, D1System, D2System, DriveField, InitialState, Level, ModelError,
};

/// Registered preset names, in validation order.
pub const PRESET_NAMES: &[&str] = &[
    "two-level",
    "autler-townes-doublet",
    "at-quartet",
    "fig2-trapping",
    "fig2-notrapping",
    "fig2-alt-trapping",
    "fig2-alt-notrapping",
    "d1-trapping",
    "d1-fig3a",
    "d1-fig3b",
    "d1-fig3c",
    "d1-fig3d",
    "d1-fig3e",
    "d1-fig3f",
];

#[derive(Debug, Clone, PartialEq)]
pub enum PresetSystem {
    D2(D2System),
    D1(D1System),
}

/// Qualitative checks a preset's spectrum must pass.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct ExpectedSignature {
    /// Number of peaks on the default grid at the default prominence.
    pub peak_count: Option<usize>,
    /// Width of every peak (single-peak presets).
    pub fwhm: Option<f64>,
    /// Distance between the outermost peaks.
    pub splitting: Option<f64>,
    /// Verdict of the trapping-condition check.
    pub trapping: Option<bool>,
    /// Central branch emits nothing.
    pub dark_central: bool,
    /// Spectrum is mirror symmetric about `δ = 0`.
    pub symmetric: bool,
    /// Spectrum vanishes identically.
    pub zero_spectrum: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ScenarioPreset {
    pub name: &'static str,
    pub system: PresetSystem,
    pub expected: ExpectedSignature,
}

fn field(magnitude: f64, phase: f64) -> DriveField {
    DriveField::new(magnitude, phase).expect("preset drives are valid")
}

fn d2(mags: [f64; 4], phase2: f64, phase3: f64, initial: Level) -> D2System {
    D2System::resonant(
        [1.0; 3],
        13.0,
        [
            field(mags[0], 0.0),
            field(mags[1], phase2),
            field(mags[2], phase3),
            field(mags[3], 0.0),
        ],
    )
    .with_initial(InitialState::Level(initial))
}

/// `d1(|o1|, |o2|, |m1|, |m2|, φ2, φ3)`.
fn d1(o1: f64, o2: f64, m1: f64, m2: f64, phase2: f64, phase3: f64) -> D1System {
    D1System {
        gamma: 1.0,
        optical: [field(o1, phase3), field(o2, phase2)],
        microwave: [field(m1, 0.0), field(m2, 0.0)],
        initial: D1Initial::Level(D1Level::G3),
    }
}

/// Looks up a preset by name.
pub fn preset(name: &str) -> Result<ScenarioPreset, ModelError> {
    let three_pi_2 = 1.5 * PI;
    let (name, system, expected) = match name {
        "two-level" => (
            "two-level",
            PresetSystem::D2(d2([0.0; 4], 0.0, 0.0, Level::A1)),
            ExpectedSignature {
                peak_count: Some(1),
                fwhm: Some(1.0),
                ..Default::default()
            },
        ),
        "autler-townes-doublet" => (
            "autler-townes-doublet",
            PresetSystem::D2(d2([5.0, 0.0, 0.0, 0.0], 0.0, 0.0, Level::B)),
            ExpectedSignature {
                peak_count: Some(2),
                splitting: Some(10.0),
                ..Default::default()
            },
        ),
        "at-quartet" => (
            "at-quartet",
            PresetSystem::D2(d2([3.0, 2.0, 2.0, 0.0], 0.0, 0.0, Level::B)),
            ExpectedSignature {
                peak_count: Some(12),
                ..Default::default()
            },
        ),
        "fig2-trapping" => (
            "fig2-trapping",
            PresetSystem::D2(d2([2.0, 1.0, 1.0, 2.0], PI, 0.0, Level::B)),
            ExpectedSignature {
                peak_count: Some(4),
                trapping: Some(true),
                dark_central: true,
                ..Default::default()
            },
        ),
        "fig2-notrapping" => (
            "fig2-notrapping",
            PresetSystem::D2(d2([2.0, 1.0, 1.0, 2.0], FRAC_PI_2, three_pi_2, Level::B)),
            ExpectedSignature {
                peak_count: Some(9),
                trapping: Some(false),
                ..Default::default()
            },
        ),
        "fig2-alt-trapping" => (
            "fig2-alt-trapping",
            PresetSystem::D2(d2([0.5, 0.9, 0.5, 0.9], PI, 0.0, Level::B)),
            ExpectedSignature {
                peak_count: Some(4),
                trapping: Some(true),
                dark_central: true,
                ..Default::default()
            },
        ),
        "fig2-alt-notrapping" => (
            "fig2-alt-notrapping",
            PresetSystem::D2(d2([0.5, 0.9, 0.5, 0.9], FRAC_PI_2, three_pi_2, Level::B)),
            ExpectedSignature {
                peak_count: Some(8),
                trapping: Some(false),
                ..Default::default()
            },
        ),
        "d1-trapping" | "d1-fig3c" => (
            if name == "d1-trapping" { "d1-trapping" } else { "d1-fig3c" },
            PresetSystem::D1(d1(1.0, 1.0, 1.0, 1.0, PI, 0.0)),
            ExpectedSignature {
                peak_count: Some(0),
                trapping: Some(true),
                zero_spectrum: true,
                symmetric: true,
                ..Default::default()
            },
        ),
        "d1-fig3f" => (
            "d1-fig3f",
            PresetSystem::D1(d1(2.0, 2.0, 1.0, 1.0, PI, 0.0)),
            ExpectedSignature {
                peak_count: Some(0),
                trapping: Some(true),
                zero_spectrum: true,
                symmetric: true,
                ..Default::default()
            },
        ),
        "d1-fig3a" => (
            "d1-fig3a",
            PresetSystem::D1(d1(0.5, 0.5, 1.0, 1.0, FRAC_PI_2, three_pi_2)),
            d1_open_signature(3),
        ),
        "d1-fig3b" => (
            "d1-fig3b",
            PresetSystem::D1(d1(0.5, 0.5, 1.0, 1.0, three_pi_2, FRAC_PI_2)),
            d1_open_signature(3),
        ),
        "d1-fig3d" => (
            "d1-fig3d",
            PresetSystem::D1(d1(0.1, 1.0, 1.0, 1.0, three_pi_2, FRAC_PI_2)),
            d1_open_signature(4),
        ),
        "d1-fig3e" => (
            "d1-fig3e",
            PresetSystem::D1(d1(0.1, 1.0, 1.0, 1.0, FRAC_PI_2, three_pi_2)),
            d1_open_signature(4),
        ),
        other => return Err(ModelError::UnknownPreset(other.to_string())),
    };
    Ok(ScenarioPreset {
        name,
        system,
        expected,
    })
}

fn d1_open_signature(peaks: usize) -> ExpectedSignature {
    ExpectedSignature {
        peak_count: Some(peaks),
        trapping: Some(false),
        symmetric: true,
        ..Default::default()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::validate_system;

    #[test]
    fn every_registered_name_resolves() {
        for &name in PRESET_NAMES {
            let p = preset(name).unwrap();
            assert_eq!(p.name, name);
            if let PresetSystem::D2(sys) = &p.system {
                assert!(validate_system(sys).unwrap().analytic_admissible);
            }
        }
        assert!(matches!(preset("nope"), Err(ModelError::UnknownPreset(_))));
    }

    #[test]
    fn presets_are_deterministic() {
        for &name in PRESET_NAMES {
            assert_eq!(preset(name).unwrap(), preset(name).unwrap());
        }
    }

    #[test]
    fn fig2_trapping_values() {
        let PresetSystem::D2(sys) = preset("fig2-trapping").unwrap().system else {
            panic!("expected a D2 preset");
        };
        let mags: alloc::vec::Vec<f64> = sys.drives.iter().map(|d| d.magnitude()).collect();
        assert_eq!(mags, alloc::vec![2.0, 1.0, 1.0, 2.0]);
        assert_eq!(sys.drives[1].phase(), PI);
        assert_eq!(sys.drives[2].phase(), 0.0);
    }

    #[test]
    fn d1_fig3a_values() {
        let PresetSystem::D1(sys) = preset("d1-fig3a").unwrap().system else {
            panic!("expected a D1 preset");
        };
        assert_eq!(sys.optical[0].magnitude(), 0.5);
        assert_eq!(sys.optical[1].phase(), FRAC_PI_2);
        assert_eq!(sys.optical[0].phase(), 1.5 * PI);
        assert_eq!(sys.microwave[1].magnitude(), 1.0);
    }
}
