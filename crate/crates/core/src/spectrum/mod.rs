//! Laplace-domain emission spectrum.
//!
//! Branch `n` (emission from `a_n`) is evaluated at `δ_n = δ + shift_n` with
//! shifts `(+ω12, 0, −ω12)`. The amplitude is `𝒜_n = N_n(δ_n)/D(δ_n)` with `D`
//! the monic characteristic quartic; its roots sit in the upper half plane at
//! `peak + i·FWHM/2`. The intensity of branch `n` is `Γ_n |𝒜_n|² / 2π`.

use alloc::vec::Vec;
use core::f64::consts::PI;
use core::fmt;

use crate::math::{Complex64, ZERO};
use crate::model::{self, D1System, D2System, ModelError};

pub mod amplitudes;
pub mod quartic;
pub mod residues;

pub use amplitudes::{branch_amplitude, laplace_solve_oracle, steady_state_amplitudes};
pub use quartic::{characteristic_quartic, quartic_roots, QuarticPoly, QuarticRoots};

#[derive(Debug, Clone, PartialEq)]
pub enum SpectrumError {
    NotAnalyticAdmissible,
    /// `D` vanishes at the requested detuning.
    PoleHit { delta: f64 },
    /// The Laplace matrix is singular at the requested detuning.
    SingularSystem { delta: f64 },
    InvalidSystem(Vec<ModelError>),
}

impl fmt::Display for SpectrumError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::NotAnalyticAdmissible => write!(
                f,
                "analytic path needs resonant drives, no alignment terms and omega12 = omega23"
            ),
            Self::PoleHit { delta } => write!(f, "detuning {delta} sits on a pole"),
            Self::SingularSystem { delta } => {
                write!(f, "Laplace system is singular at detuning {delta}")
            }
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

impl core::error::Error for SpectrumError {}

/// Emission branch, named after the decaying upper level.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Branch {
    One,
    Two,
    Three,
}

impl Branch {
    pub const ALL: [Branch; 3] = [Branch::One, Branch::Two, Branch::Three];

    pub fn index(self) -> usize {
        match self {
            Branch::One => 0,
            Branch::Two => 1,
            Branch::Three => 2,
        }
    }

    pub fn number(self) -> usize {
        self.index() + 1
    }

    pub fn from_number(n: usize) -> Option<Self> {
        match n {
            1 => Some(Branch::One),
            2 => Some(Branch::Two),
            3 => Some(Branch::Three),
            _ => None,
        }
    }

    /// Offset added to the reporting detuning to get this branch's argument.
    pub fn shift(self, sys: &D2System) -> f64 {
        sys.branch_shifts()[self.index()]
    }
}

/// One term `residue / (δ − pole)^order` of a branch amplitude.
///
/// `pole.re` is the peak location in the reporting detuning and `pole.im` is
/// half the width (non-negative for a physical system).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PoleTerm {
    pub pole: Complex64,
    pub residue: Complex64,
    pub order: usize,
    /// Undamped pole: a dressed state that never decays.
    pub trapped: bool,
}

impl PoleTerm {
    pub fn fwhm(&self) -> f64 {
        2.0 * self.pole.im
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Method {
    Analytic,
    TimeDomain,
}

impl Method {
    pub fn name(self) -> &'static str {
        match self {
            Method::Analytic => "analytic",
            Method::TimeDomain => "timedomain",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct SpectrumOptions {
    /// Adds the inter-branch interference terms to the total, treating the
    /// three emission dipoles as parallel.
    pub cross_terms: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SpectrumResult {
    pub grid: Vec<f64>,
    pub branch_intensity: [Vec<f64>; 3],
    pub total: Vec<f64>,
    /// Branch amplitudes `𝒜_n` on the grid.
    pub amplitudes: [Vec<Complex64>; 3],
    /// Pole–residue decomposition per branch; empty for time-domain results.
    pub branch_poles: [Vec<PoleTerm>; 3],
    pub method: Method,
    pub cross_terms: bool,
}

impl SpectrumResult {
    /// Assembles intensities from branch amplitudes.
    pub fn from_amplitudes(
        grid: Vec<f64>,
        amplitudes: [Vec<Complex64>; 3],
        gamma: [f64; 3],
        branch_poles: [Vec<PoleTerm>; 3],
        method: Method,
        options: SpectrumOptions,
    ) -> Self {
        let norm = 1.0 / (2.0 * PI);
        let branch_intensity: [Vec<f64>; 3] = core::array::from_fn(|n| {
            amplitudes[n]
                .iter()
                .map(|a| gamma[n] * a.norm_sqr() * norm)
                .collect()
        });
        let total = (0..grid.len())
            .map(|k| {
                if options.cross_terms {
                    let field = (0..3).fold(ZERO, |acc, n| {
                        acc + amplitudes[n][k] * crate::math::sqrt(gamma[n])
                    });
                    field.norm_sqr() * norm
                } else {
                    branch_intensity.iter().map(|b| b[k]).sum()
                }
            })
            .collect();
        Self {
            grid,
            branch_intensity,
            total,
            amplitudes,
            branch_poles,
            method,
            cross_terms: options.cross_terms,
        }
    }

    pub fn len(&self) -> usize {
        self.grid.len()
    }

    pub fn is_empty(&self) -> bool {
        self.grid.is_empty()
    }

    pub fn max_total(&self) -> f64 {
        self.total.iter().copied().fold(0.0, f64::max)
    }
}

/// Pole–residue decomposition of every branch amplitude.
pub fn branch_poles(sys: &D2System) -> Result<[Vec<PoleTerm>; 3], SpectrumError> {
    let mut out: [Vec<PoleTerm>; 3] = Default::default();
    for branch in Branch::ALL {
        let q = characteristic_quartic(sys, branch)?;
        let roots = quartic_roots(&q);
        let num = amplitudes::numerator_poly(sys, branch);
        out[branch.index()] = residues::pole_terms(&num, &q, &roots);
    }
    Ok(out)
}

/// Analytic spectrum on a reporting grid.
pub fn spectrum_analytic(
    sys: &D2System,
    grid: &[f64],
    options: SpectrumOptions,
) -> Result<SpectrumResult, SpectrumError> {
    if !sys.analytic_admissible() {
        return Err(SpectrumError::NotAnalyticAdmissible);
    }
    let poles = branch_poles(sys)?;
    let coeffs = quartic::quartic_coefficients(sys.gamma, sys.rabi());
    let mut amps: [Vec<Complex64>; 3] = Default::default();
    for branch in Branch::ALL {
        let n = branch.index();
        amps[n] = grid
            .iter()
            .map(|&delta| match amplitudes::closed_form(sys, &coeffs, branch, delta) {
                Err(SpectrumError::PoleHit { .. }) => residues::evaluate_at_pole(&poles[n], delta),
                other => other,
            })
            .collect::<Result<Vec<_>, _>>()?;
    }
    Ok(SpectrumResult::from_amplitudes(
        grid.to_vec(),
        amps,
        sys.gamma,
        poles,
        Method::Analytic,
        options,
    ))
}

/// Spectrum of the D1 scheme: the chain-mapped central branch.
pub fn d1_spectrum(sys: &D1System, grid: &[f64]) -> Result<SpectrumResult, SpectrumError> {
    let chain = model::d1_to_chain(sys).map_err(SpectrumError::InvalidSystem)?;
    spectrum_analytic(&chain, grid, SpectrumOptions::default())
}
