//! Time-domain route: propagation of the amplitude equations and numerical
//! emission integrals `∫₀^∞ e^{−iδ_n t} A_n(t) dt`.
//!
//! Equations of motion in the rotating frame (`c_ij = p_k √(Γ_i Γ_j) / 2`):
//!
//! ```text
//! A1' = −iΩ2 e^{iΔ2t} A2 − iΩ1 e^{iΔ1t} B − Γ1/2 A1 − c12 e^{iω12t} A2 − c13 e^{iω13t} A3
//! A2' = −iΩ2* e^{−iΔ2t} A1 − iΩ3 e^{iΔ3t} A3 − Γ2/2 A2 − c12 e^{−iω12t} A1 − c23 e^{iω23t} A3
//! A3' = −iΩ3* e^{−iΔ3t} A2 − iΩ4 e^{iΔ4t} B − Γ3/2 A3 − c13 e^{−iω13t} A1 − c23 e^{−iω23t} A2
//! B'  = −iΩ1* e^{−iΔ1t} A1 − iΩ4* e^{−iΔ4t} A3
//! ```
//!
//! with `ω13 = ω12 + ω23` and alignments `(p1, p2, p3)` on the pairs
//! `(1,2), (1,3), (2,3)`.

use alloc::vec::Vec;
use core::fmt;

use crate::math::{self, Complex64, I, ZERO};
use crate::model::D2System;
use crate::spectrum::{Branch, Method, SpectrumOptions, SpectrumResult};

pub mod filon;
pub mod rk;

use rk::{Integrator, State, VectorField};

pub const DEFAULT_T_FINAL: f64 = 60.0;
pub const DEFAULT_TOL: f64 = 1e-8;
/// Horizon may grow up to this multiple of `t_final`.
pub const MAX_HORIZON_FACTOR: f64 = 64.0;
/// Convergence factor `ε` for amplitudes that never decay.
pub const CONVERGENCE_FACTOR: f64 = 1e-3;

#[derive(Debug, Clone, PartialEq)]
pub enum DynamicsError {
    StepSizeUnderflow { time: f64 },
    /// No plateau (or no decay) within the horizon cap; carries the last two
    /// window values of the monitored quantity.
    NotConverged { previous: f64, last: f64 },
    InvalidHorizon { t_final: f64 },
}

impl fmt::Display for DynamicsError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::StepSizeUnderflow { time } => {
                write!(f, "step size underflow at t = {time}")
            }
            Self::NotConverged { previous, last } => write!(
                f,
                "not converged within the horizon (last windows {previous:e}, {last:e})"
            ),
            Self::InvalidHorizon { t_final } => {
                write!(f, "t_final = {t_final} must be positive and finite")
            }
        }
    }
}

impl core::error::Error for DynamicsError {}

/// Knobs of the time-domain route.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DynamicsOptions {
    pub t_final: f64,
    pub tol: f64,
    pub max_horizon_factor: f64,
}

impl Default for DynamicsOptions {
    fn default() -> Self {
        Self {
            t_final: DEFAULT_T_FINAL,
            tol: DEFAULT_TOL,
            max_horizon_factor: MAX_HORIZON_FACTOR,
        }
    }
}

impl DynamicsOptions {
    pub fn new(t_final: f64, tol: f64) -> Self {
        Self {
            t_final,
            tol,
            ..Self::default()
        }
    }

    /// An amplitude counts as decayed once it stays below this.
    pub fn tail_tolerance(&self) -> f64 {
        self.tol * 1e-2
    }
}

/// Right-hand side of the amplitude equations.
#[derive(Debug, Clone)]
pub struct Equations {
    rabi: [Complex64; 4],
    detunings: [f64; 4],
    half_gamma: [f64; 3],
    /// `(c12, c13, c23)`.
    cross: [f64; 3],
    /// `(ω12, ω13, ω23)`.
    splitting: [f64; 3],
}

impl Equations {
    pub fn new(sys: &D2System) -> Self {
        let g = sys.gamma;
        let p = sys.alignments;
        Self {
            rabi: sys.rabi(),
            detunings: sys.detunings,
            half_gamma: [0.5 * g[0], 0.5 * g[1], 0.5 * g[2]],
            cross: [
                0.5 * p[0] * math::sqrt(g[0] * g[1]),
                0.5 * p[1] * math::sqrt(g[0] * g[2]),
                0.5 * p[2] * math::sqrt(g[1] * g[2]),
            ],
            splitting: [sys.omega12, sys.omega12 + sys.omega23, sys.omega23],
        }
    }

    /// Fastest intrinsic angular frequency of the equations.
    pub fn fastest_frequency(&self) -> f64 {
        let drives: f64 = self.rabi.iter().map(|o| o.norm()).sum();
        let detuning = self.detunings.iter().map(|d| d.abs()).fold(0.0, f64::max);
        let cross = if self.cross.iter().any(|&c| c != 0.0) {
            self.splitting[1].abs()
        } else {
            0.0
        };
        let decay = self.half_gamma.iter().copied().fold(0.0, f64::max);
        2.0 * drives + detuning + cross + decay
    }
}

fn phase(w: f64, t: f64) -> Complex64 {
    if w == 0.0 {
        Complex64::new(1.0, 0.0)
    } else {
        math::cis(w * t)
    }
}

impl VectorField for Equations {
    fn eval(&self, t: f64, y: &State) -> State {
        let [a1, a2, a3, b] = *y;
        let [o1, o2, o3, o4] = self.rabi;
        let [d1, d2, d3, d4] = self.detunings;
        let [g1, g2, g3] = self.half_gamma;
        let e1 = phase(d1, t);
        let e2 = phase(d2, t);
        let e3 = phase(d3, t);
        let e4 = phase(d4, t);
        let mut out = [
            -I * (o2 * e2 * a2 + o1 * e1 * b) - a1 * g1,
            -I * (o2.conj() * e2.conj() * a1 + o3 * e3 * a3) - a2 * g2,
            -I * (o3.conj() * e3.conj() * a2 + o4 * e4 * b) - a3 * g3,
            -I * (o1.conj() * e1.conj() * a1 + o4.conj() * e4.conj() * a3),
        ];
        let [c12, c13, c23] = self.cross;
        if c12 != 0.0 || c13 != 0.0 || c23 != 0.0 {
            let w12 = math::cis(self.splitting[0] * t);
            let w13 = math::cis(self.splitting[1] * t);
            let w23 = math::cis(self.splitting[2] * t);
            out[0] -= (w12 * a2) * c12 + (w13 * a3) * c13;
            out[1] -= (w12.conj() * a1) * c12 + (w23 * a3) * c23;
            out[2] -= (w13.conj() * a1) * c13 + (w23.conj() * a2) * c23;
        }
        out
    }
}

/// Amplitudes on a uniform time grid, with their time derivatives.
#[derive(Debug, Clone, PartialEq)]
pub struct AmplitudeTrajectory {
    pub times: Vec<f64>,
    /// `(A1, A2, A3, B)` at each time.
    pub amps: Vec<State>,
    /// `d/dt (A1, A2, A3, B)` at each time.
    pub derivs: Vec<State>,
}

impl AmplitudeTrajectory {
    pub fn spacing(&self) -> f64 {
        if self.times.len() < 2 {
            0.0
        } else {
            self.times[1] - self.times[0]
        }
    }

    pub fn final_time(&self) -> f64 {
        self.times.last().copied().unwrap_or(0.0)
    }

    pub fn norm(&self, k: usize) -> f64 {
        self.amps[k].iter().map(|a| a.norm_sqr()).sum()
    }

    /// Cubic Hermite interpolation from values and derivatives.
    pub fn interpolate(&self, t: f64) -> State {
        let h = self.spacing();
        if self.times.len() < 2 || t <= self.times[0] {
            return self.amps[0];
        }
        let last = self.times.len() - 1;
        if t >= self.times[last] {
            return self.amps[last];
        }
        let j = (((t - self.times[0]) / h) as usize).min(last - 1);
        let u = (t - self.times[j]) / h;
        let h00 = (2.0 * u - 3.0) * u * u + 1.0;
        let h10 = ((u - 2.0) * u + 1.0) * u;
        let h01 = (3.0 - 2.0 * u) * u * u;
        let h11 = (u - 1.0) * u * u;
        core::array::from_fn(|i| {
            self.amps[j][i] * h00
                + self.derivs[j][i] * (h10 * h)
                + self.amps[j + 1][i] * h01
                + self.derivs[j + 1][i] * (h11 * h)
        })
    }

    /// Largest `|A_n|` over the trailing `fraction` of the trajectory.
    pub fn tail_max(&self, level: usize, fraction: f64) -> f64 {
        let start = ((1.0 - fraction) * self.times.len() as f64) as usize;
        self.amps[start.min(self.amps.len() - 1)..]
            .iter()
            .map(|a| a[level].norm())
            .fold(0.0, f64::max)
    }
}

/// Output spacing of the uniform trajectory grid.
pub fn sample_spacing(eq: &Equations) -> f64 {
    let fast = eq.fastest_frequency();
    if fast > 0.0 {
        (0.05 / fast).min(0.005)
    } else {
        0.005
    }
}

/// Incremental propagation on a fixed uniform grid.
struct Propagator {
    integrator: Integrator<Equations>,
    h: f64,
    trajectory: AmplitudeTrajectory,
}

impl Propagator {
    fn new(sys: &D2System, tol: f64) -> Self {
        let eq = Equations::new(sys);
        let h = sample_spacing(&eq);
        let y0 = sys.initial.amplitudes();
        let d0 = eq.eval(0.0, &y0);
        Self {
            integrator: Integrator::new(eq, y0, h, tol),
            h,
            trajectory: AmplitudeTrajectory {
                times: alloc::vec![0.0],
                amps: alloc::vec![y0],
                derivs: alloc::vec![d0],
            },
        }
    }

    /// Extends the stored trajectory to at least `t_end`.
    fn extend_to(&mut self, t_end: f64) -> Result<(), DynamicsError> {
        let n_end = libm::ceil(t_end / self.h - 1e-9) as usize;
        let mut k = self.trajectory.times.len();
        self.trajectory.times.reserve(n_end + 1 - k.min(n_end + 1));
        while k <= n_end {
            let t = k as f64 * self.h;
            self.integrator.advance_to(t)?;
            self.trajectory.times.push(t);
            self.trajectory.amps.push(*self.integrator.state());
            self.trajectory.derivs.push(self.integrator.derivative());
            k += 1;
        }
        Ok(())
    }
}

fn check_horizon(t_final: f64) -> Result<(), DynamicsError> {
    if t_final > 0.0 && t_final.is_finite() {
        Ok(())
    } else {
        Err(DynamicsError::InvalidHorizon { t_final })
    }
}

/// Integrates the amplitude equations from `t = 0` to `t_final`.
///
/// Samples are uniform with spacing [`sample_spacing`]; derivatives are
/// stored so that [`AmplitudeTrajectory::interpolate`] is cubic.
pub fn propagate(sys: &D2System, t_final: f64, tol: f64) -> Result<AmplitudeTrajectory, DynamicsError> {
    check_horizon(t_final)?;
    let mut p = Propagator::new(sys, tol);
    p.extend_to(t_final)?;
    Ok(p.trajectory)
}

/// Plateau value of the total population.
///
/// The norm has settled when its relative change over the last 10% of the
/// window is below `tol`, or when it has fallen below `tol` altogether. The
/// horizon is doubled up to [`MAX_HORIZON_FACTOR`]·`t_final` before giving up.
pub fn trapped_fraction(sys: &D2System, t_final: f64, tol: f64) -> Result<f64, DynamicsError> {
    check_horizon(t_final)?;
    let mut p = Propagator::new(sys, tol.min(DEFAULT_TOL));
    let mut horizon = t_final;
    loop {
        p.extend_to(horizon)?;
        let tr = &p.trajectory;
        let last_idx = tr.times.len() - 1;
        let last = tr.norm(last_idx);
        let previous = tr.norm(((last_idx as f64) * 0.9) as usize);
        if last <= tol || (last - previous).abs() <= tol * last {
            return Ok(last.clamp(0.0, 1.0));
        }
        if horizon * 2.0 > MAX_HORIZON_FACTOR * t_final {
            return Err(DynamicsError::NotConverged { previous, last });
        }
        horizon *= 2.0;
    }
}

/// A propagated system ready to evaluate emission integrals.
///
/// The horizon is extended until every emitting amplitude (`Γ_n > 0`) has
/// decayed below the tail tolerance.
#[derive(Debug, Clone)]
pub struct TimeDomain {
    system: D2System,
    options: DynamicsOptions,
    trajectory: AmplitudeTrajectory,
    decayed: [bool; 3],
}

impl TimeDomain {
    pub fn new(sys: &D2System, options: DynamicsOptions) -> Result<Self, DynamicsError> {
        check_horizon(options.t_final)?;
        let mut p = Propagator::new(sys, options.tol);
        let tail = options.tail_tolerance();
        let mut horizon = options.t_final;
        let decayed = loop {
            p.extend_to(horizon)?;
            let decayed: [bool; 3] =
                core::array::from_fn(|n| p.trajectory.tail_max(n, 0.1) <= tail);
            let emitting_done = (0..3).all(|n| decayed[n] || sys.gamma[n] == 0.0);
            if emitting_done || horizon * 2.0 > options.max_horizon_factor * options.t_final {
                break decayed;
            }
            horizon *= 2.0;
        };
        Ok(Self {
            system: sys.clone(),
            options,
            trajectory: p.trajectory,
            decayed,
        })
    }

    pub fn trajectory(&self) -> &AmplitudeTrajectory {
        &self.trajectory
    }

    pub fn horizon(&self) -> f64 {
        self.trajectory.final_time()
    }

    pub fn decayed(&self, branch: Branch) -> bool {
        self.decayed[branch.index()]
    }

    fn branch_frequency(&self, branch: Branch, delta: f64) -> f64 {
        let shift = [self.system.omega12, 0.0, -self.system.omega23][branch.index()];
        delta + shift
    }

    /// `∫₀^T e^{−iδ_n t} A_n dt` over the stored trajectory.
    fn truncated_integral(&self, branch: Branch, delta: f64) -> Complex64 {
        let n = branch.index();
        let tr = &self.trajectory;
        filon::integrate(
            Complex64::new(self.branch_frequency(branch, delta), 0.0),
            0.0,
            tr.spacing(),
            tr.amps.iter().zip(&tr.derivs).map(|(a, d)| (a[n], d[n])),
        )
    }

    /// Branch emission amplitude at reporting detuning `delta`.
    ///
    /// A decayed amplitude is integrated over the stored horizon. One that
    /// never decays is regularized with `e^{−εt}` at `ε` and `2ε`
    /// ([`CONVERGENCE_FACTOR`]) and extrapolated to `ε → 0`.
    pub fn amplitude(&self, branch: Branch, delta: f64) -> Result<Complex64, DynamicsError> {
        if self.decayed[branch.index()] {
            return Ok(self.truncated_integral(branch, delta));
        }
        self.regularized_amplitude(branch, delta)
    }

    fn regularized_amplitude(&self, branch: Branch, delta: f64) -> Result<Complex64, DynamicsError> {
        let eps = CONVERGENCE_FACTOR;
        let tol = self.options.tol;
        // e^{−ε T} below the tail tolerance for the smaller factor.
        let t_end = math::ln(1.0 / self.options.tail_tolerance()) / eps;
        let n = branch.index();
        let w = self.branch_frequency(branch, delta);
        let mut p = Propagator::new(&self.system, tol);
        let h = p.h;
        let omegas = [Complex64::new(w, -eps), Complex64::new(w, -2.0 * eps)];
        let weights = omegas.map(|o| filon::weights(o, h));
        let steps = omegas.map(|o| (-I * o * h).exp());
        let mut phases = [Complex64::new(1.0, 0.0); 2];
        let mut acc = [ZERO; 2];
        let mut prev = (p.trajectory.amps[0][n], p.trajectory.derivs[0][n]);
        let total = libm::ceil(t_end / h) as usize;
        let mut window_max = [0.0f64; 2];
        for k in 1..=total {
            let t = k as f64 * h;
            p.integrator.advance_to(t)?;
            let cur = (p.integrator.state()[n], p.integrator.derivative()[n]);
            for m in 0..2 {
                let wm = weights[m];
                acc[m] += phases[m] * (wm[0] * prev.0 + wm[1] * prev.1 + wm[2] * cur.0 + wm[3] * cur.1);
                phases[m] = if k % 256 == 0 {
                    (-I * omegas[m] * t).exp()
                } else {
                    phases[m] * steps[m]
                };
            }
            if k * 10 >= total * 8 {
                let slot = if k * 10 >= total * 9 { 1 } else { 0 };
                window_max[slot] = window_max[slot].max((phases[0] * cur.0).norm());
            }
            prev = cur;
        }
        if window_max[1] > self.options.tail_tolerance() {
            return Err(DynamicsError::NotConverged {
                previous: window_max[0],
                last: window_max[1],
            });
        }
        Ok(acc[0] * 2.0 - acc[1])
    }
}

/// Emission amplitude of one branch from the propagated dynamics.
pub fn branch_amplitude_numeric(
    sys: &D2System,
    branch: Branch,
    delta: f64,
    options: DynamicsOptions,
) -> Result<Complex64, DynamicsError> {
    TimeDomain::new(sys, options)?.amplitude(branch, delta)
}

/// Time-domain spectrum on a reporting grid.
///
/// Branches with `Γ_n = 0` do not emit; their amplitudes are not evaluated
/// and are reported as zero.
pub fn spectrum_time_domain(
    sys: &D2System,
    grid: &[f64],
    options: DynamicsOptions,
    spectrum_options: SpectrumOptions,
) -> Result<SpectrumResult, DynamicsError> {
    let td = TimeDomain::new(sys, options)?;
    let mut amps: [Vec<Complex64>; 3] = Default::default();
    for branch in Branch::ALL {
        let n = branch.index();
        amps[n] = if sys.gamma[n] == 0.0 {
            alloc::vec![ZERO; grid.len()]
        } else {
            grid.iter()
                .map(|&d| td.amplitude(branch, d))
                .collect::<Result<Vec<_>, _>>()?
        };
    }
    Ok(SpectrumResult::from_amplitudes(
        grid.to_vec(),
        amps,
        sys.gamma,
        Default::default(),
        Method::TimeDomain,
        spectrum_options,
    ))
}
