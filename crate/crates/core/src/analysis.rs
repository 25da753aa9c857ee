//! Spectrum post-processing: peaks, widths, areas, conservation and
//! route-to-route comparison.

use alloc::vec::Vec;
use core::f64::consts::PI;
use core::fmt;

use crate::dynamics::{self, DynamicsError, DynamicsOptions};
use crate::model::D2System;
use crate::spectrum::{self, PoleTerm, SpectrumError, SpectrumOptions, SpectrumResult};

/// Default peak threshold as a fraction of the global maximum.
pub const DEFAULT_PROMINENCE: f64 = 1e-3;
/// Edge intensity above this fraction of the maximum means the grid is too narrow.
pub const EDGE_TOLERANCE: f64 = 1e-4;
/// Points below this fraction of the peak are ignored by [`compare_spectra`].
pub const COMPARISON_FLOOR: f64 = 1e-8;
/// Intensities at or below this are treated as exactly dark.
pub const DARK_FLOOR: f64 = 1e-15;

#[derive(Debug, Clone, PartialEq)]
pub enum AnalysisError {
    GridTooNarrow { edge: f64, max: f64 },
    GridMismatch,
    Spectrum(SpectrumError),
    Dynamics(DynamicsError),
}

impl fmt::Display for AnalysisError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::GridTooNarrow { edge, max } => write!(
                f,
                "grid too narrow: edge intensity {edge:e} exceeds {EDGE_TOLERANCE:e} of the maximum {max:e}"
            ),
            Self::GridMismatch => write!(f, "spectra are on different grids"),
            Self::Spectrum(e) => write!(f, "spectrum: {e}"),
            Self::Dynamics(e) => write!(f, "dynamics: {e}"),
        }
    }
}

impl core::error::Error for AnalysisError {}

impl From<SpectrumError> for AnalysisError {
    fn from(e: SpectrumError) -> Self {
        Self::Spectrum(e)
    }
}

impl From<DynamicsError> for AnalysisError {
    fn from(e: DynamicsError) -> Self {
        Self::Dynamics(e)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum AnalysisWarning {
    /// Grid spacing exceeds a tenth of the narrowest emitting pole width.
    GridTooCoarse { spacing: f64, min_width: f64 },
}

impl fmt::Display for AnalysisWarning {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::GridTooCoarse { spacing, min_width } => write!(
                f,
                "grid spacing {spacing:e} is coarser than a tenth of the narrowest width {min_width:e}"
            ),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Peak {
    pub location: f64,
    pub height: f64,
    pub fwhm: f64,
    /// Branch number `1..=3` dominating at the peak.
    pub branch: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct PeakAnalysis {
    pub peaks: Vec<Peak>,
    pub total_area: f64,
    pub branch_areas: [f64; 3],
    pub warnings: Vec<AnalysisWarning>,
}

impl PeakAnalysis {
    pub fn count_in_branch(&self, branch: usize) -> usize {
        self.peaks.iter().filter(|p| p.branch == branch).count()
    }
}

/// `n` evenly spaced points from `a` to `b` inclusive.
pub fn linspace(a: f64, b: f64, n: usize) -> Vec<f64> {
    match n {
        0 => Vec::new(),
        1 => alloc::vec![a],
        _ => (0..n)
            .map(|k| {
                if k == n - 1 {
                    b
                } else {
                    a + (b - a) * (k as f64 / (n - 1) as f64)
                }
            })
            .collect(),
    }
}

/// Reporting grid `[−30, 30]` with 6001 points.
pub fn default_grid() -> Vec<f64> {
    linspace(-30.0, 30.0, 6001)
}

/// Narrowest width among poles that actually carry intensity.
fn min_emitting_width(spec: &SpectrumResult) -> Option<f64> {
    let mut best: Option<f64> = None;
    for poles in &spec.branch_poles {
        let max_res = poles.iter().map(|p| p.residue.norm()).fold(0.0, f64::max);
        for p in poles {
            if p.trapped || p.residue.norm() <= 1e-6 * max_res || p.residue.norm() == 0.0 {
                continue;
            }
            let w = p.fwhm();
            best = Some(best.map_or(w, |b: f64| b.min(w)));
        }
    }
    best
}

/// Local maxima above `prominence · max(total)` and above [`DARK_FLOOR`].
///
/// FWHM comes from linear interpolation of the half-height crossings; when a
/// neighbouring local minimum is reached first, that point bounds the peak.
pub fn find_peaks(spec: &SpectrumResult, prominence: f64) -> PeakAnalysis {
    let s = &spec.total;
    let g = &spec.grid;
    let threshold = (prominence * spec.max_total()).max(DARK_FLOOR);
    let mut peaks = Vec::new();
    let n = s.len();
    for k in 1..n.saturating_sub(1) {
        if !(s[k] > s[k - 1] && s[k] >= s[k + 1] && s[k] > threshold) {
            continue;
        }
        let half = 0.5 * s[k];
        let left = half_crossing(g, s, k, half, false);
        let right = half_crossing(g, s, k, half, true);
        let branch = (0..3)
            .max_by(|&a, &b| spec.branch_intensity[a][k].total_cmp(&spec.branch_intensity[b][k]))
            .unwrap_or(0)
            + 1;
        peaks.push(Peak {
            location: g[k],
            height: s[k],
            fwhm: right - left,
            branch,
        });
    }
    let mut warnings = Vec::new();
    if let Some(min_width) = min_emitting_width(spec) {
        let spacing = g
            .windows(2)
            .map(|w| w[1] - w[0])
            .fold(0.0, f64::max);
        if spacing > 0.1 * min_width {
            warnings.push(AnalysisWarning::GridTooCoarse { spacing, min_width });
        }
    }
    let areas = trapezoid_areas(spec);
    PeakAnalysis {
        peaks,
        total_area: areas.total,
        branch_areas: areas.branches,
        warnings,
    }
}

fn half_crossing(g: &[f64], s: &[f64], k: usize, half: f64, rightward: bool) -> f64 {
    let mut j = k;
    loop {
        let next = if rightward {
            if j + 1 >= s.len() {
                return g[j];
            }
            j + 1
        } else {
            if j == 0 {
                return g[0];
            }
            j - 1
        };
        if s[next] <= half {
            let t = (s[j] - half) / (s[j] - s[next]);
            return g[j] + t * (g[next] - g[j]);
        }
        if s[next] > s[j] {
            return g[j];
        }
        j = next;
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AreaReport {
    pub total: f64,
    pub branches: [f64; 3],
}

fn trapezoid(g: &[f64], s: &[f64]) -> f64 {
    g.windows(2)
        .zip(s.windows(2))
        .map(|(x, y)| 0.5 * (x[1] - x[0]) * (y[0] + y[1]))
        .sum()
}

fn trapezoid_areas(spec: &SpectrumResult) -> AreaReport {
    AreaReport {
        total: trapezoid(&spec.grid, &spec.total),
        branches: core::array::from_fn(|n| trapezoid(&spec.grid, &spec.branch_intensity[n])),
    }
}

/// Trapezoid areas of the total and per-branch intensities (any monotone grid).
pub fn integrated_area(spec: &SpectrumResult) -> Result<AreaReport, AnalysisError> {
    let max = spec.max_total();
    if let (Some(&first), Some(&last)) = (spec.total.first(), spec.total.last()) {
        let edge = first.max(last);
        if max > 0.0 && edge > EDGE_TOLERANCE * max {
            return Err(AnalysisError::GridTooNarrow { edge, max });
        }
    }
    Ok(trapezoid_areas(spec))
}

/// Gauss–Legendre nodes and weights on `[−1, 1]`.
fn gauss_legendre(n: usize) -> Vec<(f64, f64)> {
    (0..n)
        .map(|i| {
            let mut x = libm::cos(PI * (i as f64 + 0.75) / (n as f64 + 0.5));
            let mut dp = 1.0;
            for _ in 0..100 {
                let (mut p0, mut p1) = (1.0, x);
                for k in 2..=n {
                    let p2 = ((2 * k - 1) as f64 * x * p1 - (k - 1) as f64 * p0) / k as f64;
                    p0 = p1;
                    p1 = p2;
                }
                dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
                let dx = p1 / dp;
                x -= dx;
                if dx.abs() <= 1e-16 {
                    break;
                }
            }
            (x, 2.0 / ((1.0 - x * x) * dp * dp))
        })
        .collect()
}

/// Nodes per Gauss–Legendre panel.
const PANEL_ORDER: usize = 20;

/// Quadrature rule over the whole real line, adapted to a set of poles.
///
/// Panels break at `Re z ± Im z · 3^k` around every pole; the two tails
/// beyond the outermost breakpoints are mapped onto finite intervals.
#[derive(Debug, Clone, PartialEq)]
pub struct Quadrature {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

impl Quadrature {
    pub fn for_poles(poles: &[PoleTerm]) -> Self {
        let lines: Vec<(f64, f64)> = poles
            .iter()
            .filter(|p| !p.trapped)
            .map(|p| (p.pole.re, p.pole.im.abs().max(1e-9)))
            .collect();
        let (lo, hi) = lines
            .iter()
            .fold((0.0f64, 0.0f64), |(lo, hi), &(c, _)| (lo.min(c), hi.max(c)));
        let reach = 100.0 * lines.iter().fold(1.0f64, |m, &(_, w)| m.max(w));
        let (a, b) = (lo - reach, hi + reach);
        let mut cuts = alloc::vec![a, b];
        for &(c, w) in &lines {
            cuts.push(c);
            let mut d = w;
            while d < b - a {
                cuts.extend([c - d, c + d].into_iter().filter(|x| *x > a && *x < b));
                d *= 3.0;
            }
        }
        cuts.sort_by(f64::total_cmp);
        cuts.dedup_by(|x, y| (*x - *y).abs() <= 1e-12 * x.abs().max(1.0));
        let rule = gauss_legendre(PANEL_ORDER);
        let mut q = Self {
            nodes: Vec::new(),
            weights: Vec::new(),
        };
        for w in cuts.windows(2) {
            let (mid, half) = (0.5 * (w[0] + w[1]), 0.5 * (w[1] - w[0]));
            for &(x, wt) in &rule {
                q.nodes.push(mid + half * x);
                q.weights.push(half * wt);
            }
        }
        // δ = edge ± s·t/(1 − t) on t ∈ [0, 1).
        let s = reach;
        let breaks = [0.0, 0.5, 0.8, 0.95, 0.99, 1.0];
        for (edge, sign) in [(a, -1.0), (b, 1.0)] {
            for w in breaks.windows(2) {
                let (mid, half) = (0.5 * (w[0] + w[1]), 0.5 * (w[1] - w[0]));
                for &(x, wt) in &rule {
                    let t = mid + half * x;
                    let u = 1.0 - t;
                    q.nodes.push(edge + sign * s * t / u);
                    q.weights.push(half * wt * s / (u * u));
                }
            }
        }
        let mut order: Vec<usize> = (0..q.nodes.len()).collect();
        order.sort_by(|&i, &j| q.nodes[i].total_cmp(&q.nodes[j]));
        Self {
            nodes: order.iter().map(|&i| q.nodes[i]).collect(),
            weights: order.iter().map(|&i| q.weights[i]).collect(),
        }
    }

    pub fn integrate(&self, values: &[f64]) -> f64 {
        self.weights.iter().zip(values).map(|(w, v)| w * v).sum()
    }
}

/// Total and per-branch spectral areas over the whole line, integrated with
/// the pole-adapted [`Quadrature`].
pub fn spectral_areas(sys: &D2System, options: SpectrumOptions) -> Result<AreaReport, AnalysisError> {
    let poles = spectrum::branch_poles(sys)?;
    let all: Vec<PoleTerm> = poles.iter().flatten().copied().collect();
    let rule = Quadrature::for_poles(&all);
    let spec = spectrum::spectrum_analytic(sys, &rule.nodes, options)?;
    Ok(AreaReport {
        total: rule.integrate(&spec.total),
        branches: core::array::from_fn(|n| rule.integrate(&spec.branch_intensity[n])),
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConservationReport {
    /// `∫ S dδ` over the total intensity.
    pub emitted_spectral: f64,
    /// `1 − trapped`.
    pub emitted_dynamic: f64,
    pub trapped: f64,
    pub defect: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct ConservationOptions {
    pub spectrum: SpectrumOptions,
    pub dynamics: DynamicsOptions,
}


/// Compares the emitted probability from the spectral integral with the
/// population lost in the dynamics.
pub fn conservation_check(
    sys: &D2System,
    options: ConservationOptions,
) -> Result<ConservationReport, AnalysisError> {
    let emitted_spectral = spectral_areas(sys, options.spectrum)?.total;
    let trapped = dynamics::trapped_fraction(sys, options.dynamics.t_final, options.dynamics.tol)?;
    let emitted_dynamic = 1.0 - trapped;
    Ok(ConservationReport {
        emitted_spectral,
        emitted_dynamic,
        trapped,
        defect: (emitted_spectral - emitted_dynamic).abs(),
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Comparison {
    /// `max |a − b| / max(a, b)` over significant points.
    pub max_rel_err: f64,
    /// Root mean square of the same relative errors.
    pub rms_err: f64,
    /// Number of points that entered the metrics.
    pub points: usize,
}

/// Pointwise comparison of total intensities on identical grids.
pub fn compare_spectra(a: &SpectrumResult, b: &SpectrumResult) -> Result<Comparison, AnalysisError> {
    if a.grid != b.grid {
        return Err(AnalysisError::GridMismatch);
    }
    let peak = a.max_total().max(b.max_total());
    let mut max_rel = 0.0f64;
    let mut sum_sq = 0.0;
    let mut points = 0;
    for (&x, &y) in a.total.iter().zip(&b.total) {
        let m = x.max(y);
        if m <= COMPARISON_FLOOR * peak || m == 0.0 {
            continue;
        }
        let rel = (x - y).abs() / m;
        max_rel = max_rel.max(rel);
        sum_sq += rel * rel;
        points += 1;
    }
    Ok(Comparison {
        max_rel_err: max_rel,
        rms_err: if points == 0 {
            0.0
        } else {
            crate::math::sqrt(sum_sq / points as f64)
        },
        points,
    })
}
