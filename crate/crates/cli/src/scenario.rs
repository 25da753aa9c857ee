//! Scenario JSON files.
//!
//! ```json
//! {
//!   "system": "d2",
//!   "gamma": [1, 1, 1],
//!   "omega12": 13, "omega23": 13,
//!   "fields": [{"mag": 2, "phase": 0}, {"mag": 1, "phase": 3.14159}, ...],
//!   "detunings": [0, 0, 0, 0],
//!   "p": [0, 0, 0],
//!   "initial": "B"
//! }
//! ```
//!
//! D1 scenarios use `"system": "d1"`, a single decay rate, fields in
//! `[o1, o2, m1, m2]` order and initial levels `g1`, `g2`, `g3`, `e`.
//! `initial` may also be four `[re, im]` pairs.

use std::fs;
use std::path::Path;

use fgc_core::model::{self, D1Initial, D1Level, ModelError};
use fgc_core::preset::{self, PresetSystem};
use fgc_core::{Complex64, D1System, D2System, DriveField, InitialState, Level};
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum ScenarioError {
    #[error("cannot read {path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
    #[error("malformed scenario: {0}")]
    Json(#[from] serde_json::Error),
    #[error("schema violation: {0}")]
    Schema(String),
    #[error("invalid scenario: {}", join(.0))]
    Invalid(Vec<ModelError>),
    #[error("{0}")]
    Preset(ModelError),
}

fn join(errors: &[ModelError]) -> String {
    errors.iter().map(ToString::to_string).collect::<Vec<_>>().join("; ")
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SystemKind {
    D2,
    D1,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FieldSpec {
    pub mag: f64,
    pub phase: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(untagged)]
pub enum InitialSpec {
    Level(String),
    Amplitudes([[f64; 2]; 4]),
}

// Decoded through `Value`: untagged derives cannot see arbitrary-precision numbers.
impl<'de> Deserialize<'de> for InitialSpec {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        use serde::de::Error;
        match serde_json::Value::deserialize(d)? {
            serde_json::Value::String(s) => Ok(InitialSpec::Level(s)),
            v => serde_json::from_value(v).map(InitialSpec::Amplitudes).map_err(|e| {
                D::Error::custom(format!("initial must be a level name or four [re, im] pairs: {e}"))
            }),
        }
    }
}

/// On-disk scenario description.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Scenario {
    pub system: SystemKind,
    pub gamma: Vec<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub omega12: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub omega23: Option<f64>,
    pub fields: Vec<FieldSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub detunings: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub p: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub initial: Option<InitialSpec>,
}

/// A resolved, validated system.
#[derive(Debug, Clone, PartialEq)]
pub enum System {
    D2(D2System),
    D1(D1System),
}

impl System {
    /// The four-amplitude chain every numerical routine runs on.
    pub fn chain(&self) -> D2System {
        match self {
            System::D2(s) => s.clone(),
            System::D1(s) => model::d1_to_chain(s).expect("validated D1 system"),
        }
    }

    pub fn kind(&self) -> SystemKind {
        match self {
            System::D2(_) => SystemKind::D2,
            System::D1(_) => SystemKind::D1,
        }
    }
}

fn expect_len<T>(what: &str, v: &[T], n: usize) -> Result<(), ScenarioError> {
    if v.len() == n {
        Ok(())
    } else {
        Err(ScenarioError::Schema(format!("`{what}` needs {n} entries, found {}", v.len())))
    }
}

fn field(spec: &FieldSpec, index: usize) -> Result<DriveField, ScenarioError> {
    DriveField::new(spec.mag, spec.phase).map_err(|e| match e {
        ModelError::NegativeMagnitude { value, .. } => {
            ScenarioError::Invalid(vec![ModelError::NegativeMagnitude { index, value }])
        }
        other => ScenarioError::Invalid(vec![other]),
    })
}

fn amplitudes(raw: &[[f64; 2]; 4]) -> [Complex64; 4] {
    raw.map(|[re, im]| Complex64::new(re, im))
}

impl Scenario {
    pub fn load(path: &Path) -> Result<Self, ScenarioError> {
        let text = fs::read_to_string(path).map_err(|source| ScenarioError::Io {
            path: path.display().to_string(),
            source,
        })?;
        Ok(serde_json::from_str(&text)?)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("scenario serializes")
    }

    /// Checks the schema and every model invariant.
    pub fn resolve(&self) -> Result<System, ScenarioError> {
        match self.system {
            SystemKind::D2 => self.resolve_d2().map(System::D2),
            SystemKind::D1 => self.resolve_d1().map(System::D1),
        }
    }

    fn resolve_d2(&self) -> Result<D2System, ScenarioError> {
        expect_len("gamma", &self.gamma, 3)?;
        expect_len("fields", &self.fields, 4)?;
        let omega12 = self
            .omega12
            .ok_or_else(|| ScenarioError::Schema("`omega12` is required for d2".into()))?;
        let mut drives = [DriveField::OFF; 4];
        for (i, f) in self.fields.iter().enumerate() {
            drives[i] = field(f, i)?;
        }
        let mut sys = D2System::resonant([self.gamma[0], self.gamma[1], self.gamma[2]], omega12, drives);
        sys.omega23 = self.omega23.unwrap_or(omega12);
        if let Some(d) = &self.detunings {
            expect_len("detunings", d, 4)?;
            sys.detunings = [d[0], d[1], d[2], d[3]];
        }
        if let Some(p) = &self.p {
            expect_len("p", p, 3)?;
            sys.alignments = [p[0], p[1], p[2]];
        }
        sys.initial = match &self.initial {
            None => InitialState::Level(Level::B),
            Some(InitialSpec::Amplitudes(a)) => InitialState::Amplitudes(amplitudes(a)),
            Some(InitialSpec::Level(name)) => InitialState::Level(match name.to_ascii_lowercase().as_str() {
                "a1" => Level::A1,
                "a2" => Level::A2,
                "a3" => Level::A3,
                "b" => Level::B,
                other => {
                    return Err(ScenarioError::Schema(format!(
                        "unknown d2 level `{other}` (expected A1, A2, A3 or B)"
                    )))
                }
            }),
        };
        model::validate_system(&sys).map_err(ScenarioError::Invalid)?;
        Ok(sys)
    }

    fn resolve_d1(&self) -> Result<D1System, ScenarioError> {
        expect_len("gamma", &self.gamma, 1)?;
        expect_len("fields", &self.fields, 4)?;
        for (name, v) in [("omega12", self.omega12), ("omega23", self.omega23)] {
            if v.is_some_and(|w| w != 0.0) {
                return Err(ScenarioError::Schema(format!("`{name}` must be absent or 0 for d1")));
            }
        }
        if self.detunings.as_ref().is_some_and(|d| d.iter().any(|&x| x != 0.0)) {
            return Err(ScenarioError::Schema("d1 scenarios are resonant; drop `detunings`".into()));
        }
        if self.p.as_ref().is_some_and(|p| p.iter().any(|&x| x != 0.0)) {
            return Err(ScenarioError::Schema("d1 scenarios have no alignment terms; drop `p`".into()));
        }
        let f = |i: usize| field(&self.fields[i], i);
        let mut sys = D1System::new(self.gamma[0], [f(0)?, f(1)?], [f(2)?, f(3)?]);
        sys.initial = match &self.initial {
            None => D1Initial::Level(D1Level::G3),
            Some(InitialSpec::Amplitudes(a)) => D1Initial::Amplitudes(amplitudes(a)),
            Some(InitialSpec::Level(name)) => D1Initial::Level(match name.to_ascii_lowercase().as_str() {
                "g1" => D1Level::G1,
                "g2" => D1Level::G2,
                "g3" => D1Level::G3,
                "e" => D1Level::E,
                other => {
                    return Err(ScenarioError::Schema(format!(
                        "unknown d1 level `{other}` (expected g1, g2, g3 or e)"
                    )))
                }
            }),
        };
        model::validate_d1(&sys).map_err(ScenarioError::Invalid)?;
        Ok(sys)
    }

    /// Echo of a resolved system in scenario form.
    pub fn from_system(system: &System) -> Self {
        let spec = |d: &DriveField| FieldSpec {
            mag: d.magnitude(),
            phase: d.phase(),
        };
        let pairs = |a: [Complex64; 4]| a.map(|z| [z.re, z.im]);
        match system {
            System::D2(s) => Scenario {
                system: SystemKind::D2,
                gamma: s.gamma.to_vec(),
                omega12: Some(s.omega12),
                omega23: Some(s.omega23),
                fields: s.drives.iter().map(spec).collect(),
                detunings: Some(s.detunings.to_vec()),
                p: Some(s.alignments.to_vec()),
                initial: Some(match s.initial {
                    InitialState::Level(l) => InitialSpec::Level(
                        ["A1", "A2", "A3", "B"][l.index()].to_string(),
                    ),
                    InitialState::Amplitudes(a) => InitialSpec::Amplitudes(pairs(a)),
                }),
            },
            System::D1(s) => Scenario {
                system: SystemKind::D1,
                gamma: vec![s.gamma],
                omega12: None,
                omega23: None,
                fields: [s.optical[0], s.optical[1], s.microwave[0], s.microwave[1]]
                    .iter()
                    .map(spec)
                    .collect(),
                detunings: None,
                p: None,
                initial: Some(match s.initial {
                    D1Initial::Level(l) => InitialSpec::Level(
                        match l {
                            D1Level::G1 => "g1",
                            D1Level::G2 => "g2",
                            D1Level::G3 => "g3",
                            D1Level::E => "e",
                        }
                        .to_string(),
                    ),
                    D1Initial::Amplitudes(a) => InitialSpec::Amplitudes(pairs(a)),
                }),
            },
        }
    }
}

/// Where a scenario came from.
#[derive(Debug, Clone, PartialEq)]
pub enum Source {
    File(String),
    Preset(String),
}

impl Source {
    pub fn describe(&self) -> String {
        match self {
            Source::File(p) => p.clone(),
            Source::Preset(n) => format!("preset:{n}"),
        }
    }
}

/// Loads a scenario file or a named preset.
pub fn load(config: Option<&Path>, preset_name: Option<&str>) -> Result<(System, Source), ScenarioError> {
    match (config, preset_name) {
        (Some(path), None) => {
            let sys = Scenario::load(path)?.resolve()?;
            Ok((sys, Source::File(path.display().to_string())))
        }
        (None, Some(name)) => {
            let p = preset::preset(name).map_err(ScenarioError::Preset)?;
            let sys = match p.system {
                PresetSystem::D2(s) => System::D2(s),
                PresetSystem::D1(s) => System::D1(s),
            };
            Ok((sys, Source::Preset(name.to_string())))
        }
        _ => Err(ScenarioError::Schema("give exactly one of --config or --preset".into())),
    }
}
