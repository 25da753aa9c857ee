//! Signature checks for the named presets.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use crate::analysis::{self, DARK_FLOOR, DEFAULT_PROMINENCE};
use crate::model::{self, D2System};
use crate::preset::{PresetSystem, ScenarioPreset};
use crate::spectrum::{self, Branch, SpectrumError, SpectrumOptions, SpectrumResult};
use crate::trapping;

/// Relative tolerance on widths and splittings.
pub const WIDTH_TOLERANCE: f64 = 0.02;
/// Relative tolerance of the closed-form vs linear-solve comparison.
pub const ORACLE_TOLERANCE: f64 = 1e-10;
/// Root residual bound relative to `Σ |c_k| |z|^k`.
pub const ROOT_RESIDUAL_TOLERANCE: f64 = 1e-9;
/// Mirror-symmetry tolerance relative to the spectrum maximum.
pub const SYMMETRY_TOLERANCE: f64 = 1e-9;
/// Points in the oracle comparison grid.
pub const ORACLE_POINTS: usize = 101;

#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

impl Check {
    fn new(name: &'static str, passed: bool, detail: String) -> Self {
        Self {
            name,
            passed,
            detail,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PresetReport {
    pub name: &'static str,
    pub checks: Vec<Check>,
}

impl PresetReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }
}

/// Closed forms vs the linear-solve oracle over `[lo, hi]`.
///
/// The error at each point is `|a − o| / max(|a|, |o|)` over points above
/// [`analysis::COMPARISON_FLOOR`] of the peak; points where either route
/// reports a pole are skipped.
pub fn oracle_max_relative_error(sys: &D2System, lo: f64, hi: f64, n: usize) -> Result<f64, SpectrumError> {
    let grid = analysis::linspace(lo, hi, n);
    let mut pairs = Vec::with_capacity(3 * n);
    for &d in &grid {
        let oracle = match spectrum::laplace_solve_oracle(sys, d) {
            Ok(o) => o,
            Err(SpectrumError::SingularSystem { .. }) => continue,
            Err(e) => return Err(e),
        };
        for b in Branch::ALL {
            match spectrum::branch_amplitude(sys, b, d) {
                Ok(a) => pairs.push((a, oracle[b.index()])),
                Err(SpectrumError::PoleHit { .. }) => {}
                Err(e) => return Err(e),
            }
        }
    }
    let peak = pairs.iter().map(|(_, o)| o.norm()).fold(0.0, f64::max);
    let floor = analysis::COMPARISON_FLOOR * peak;
    Ok(pairs
        .iter()
        .filter(|(a, o)| a.norm().max(o.norm()) > floor)
        .map(|(a, o)| (a - o).norm() / a.norm().max(o.norm()))
        .fold(0.0, f64::max))
}

/// Largest relative root residual over the three branch quartics.
pub fn root_residual(sys: &D2System) -> Result<f64, SpectrumError> {
    let mut worst = 0.0f64;
    for b in Branch::ALL {
        let q = spectrum::characteristic_quartic(sys, b)?;
        worst = worst.max(spectrum::quartic_roots(&q).max_relative_residual(&q));
    }
    Ok(worst)
}

fn symmetry_defect(s: &SpectrumResult) -> f64 {
    let max = s.max_total();
    if max == 0.0 {
        return 0.0;
    }
    s.total
        .iter()
        .zip(s.total.iter().rev())
        .map(|(a, b)| (a - b).abs())
        .fold(0.0, f64::max)
        / max
}

/// Runs every check of a preset's expected signature on the default grid.
pub fn check_preset(preset: &ScenarioPreset) -> Result<PresetReport, SpectrumError> {
    let grid = analysis::default_grid();
    let (chain, spec, trapped) = match &preset.system {
        PresetSystem::D2(sys) => {
            let spec = spectrum::spectrum_analytic(sys, &grid, SpectrumOptions::default())?;
            let verdict = trapping::fgc_check(sys, trapping::DEFAULT_TOLERANCE).satisfied;
            (sys.clone(), spec, verdict)
        }
        PresetSystem::D1(sys) => {
            let chain = model::d1_to_chain(sys).map_err(SpectrumError::InvalidSystem)?;
            let spec = spectrum::d1_spectrum(sys, &grid)?;
            let verdict = trapping::d1_trapping_check(sys, trapping::DEFAULT_TOLERANCE)
                .map_err(|_| SpectrumError::NotAnalyticAdmissible)?
                .satisfied;
            (chain, spec, verdict)
        }
    };
    let peaks = analysis::find_peaks(&spec, DEFAULT_PROMINENCE);
    let expected = &preset.expected;
    let mut checks = Vec::new();

    if let Some(n) = expected.peak_count {
        let got = peaks.peaks.len();
        checks.push(Check::new("peak_count", got == n, format!("{got} peaks, expected {n}")));
    }
    if let Some(w) = expected.fwhm {
        let worst = peaks
            .peaks
            .iter()
            .map(|p| (p.fwhm - w).abs() / w)
            .fold(0.0, f64::max);
        let ok = !peaks.peaks.is_empty() && worst <= WIDTH_TOLERANCE;
        checks.push(Check::new("fwhm", ok, format!("worst relative width error {worst:.3e}")));
    }
    if let Some(split) = expected.splitting {
        let got = match (peaks.peaks.first(), peaks.peaks.last()) {
            (Some(a), Some(b)) => b.location - a.location,
            _ => 0.0,
        };
        let ok = (got - split).abs() <= WIDTH_TOLERANCE * split;
        checks.push(Check::new("splitting", ok, format!("splitting {got:.4}, expected {split}")));
    }
    if let Some(t) = expected.trapping {
        checks.push(Check::new("trapping", trapped == t, format!("condition satisfied: {trapped}")));
    }
    if expected.dark_central {
        let max = spec.branch_intensity[1].iter().copied().fold(0.0, f64::max);
        checks.push(Check::new(
            "dark_central",
            max <= DARK_FLOOR,
            format!("max branch-2 intensity {max:.3e}"),
        ));
    }
    if expected.zero_spectrum {
        let max = spec.max_total();
        checks.push(Check::new("zero_spectrum", max <= DARK_FLOOR, format!("max intensity {max:.3e}")));
    }
    if expected.symmetric {
        let d = symmetry_defect(&spec);
        checks.push(Check::new(
            "symmetric",
            d <= SYMMETRY_TOLERANCE,
            format!("mirror defect {d:.3e}"),
        ));
    }
    let err = oracle_max_relative_error(&chain, grid[0], grid[grid.len() - 1], ORACLE_POINTS)?;
    checks.push(Check::new(
        "oracle",
        err <= ORACLE_TOLERANCE,
        format!("closed form vs linear solve {err:.3e}"),
    ));
    let res = root_residual(&chain)?;
    checks.push(Check::new(
        "root_residual",
        res <= ROOT_RESIDUAL_TOLERANCE,
        format!("relative residual {res:.3e}"),
    ));
    Ok(PresetReport {
        name: preset.name,
        checks,
    })
}
