//! Classic fourth-order Runge–Kutta with step-doubling error control and
//! local extrapolation.

use crate::math::Complex64;

use super::DynamicsError;

pub type State = [Complex64; 4];

/// Smallest step relative to `max(1, t)` before the integration is abandoned.
const MIN_RELATIVE_STEP: f64 = 1e-12;

fn axpy(y: &State, h: f64, k: &State) -> State {
    core::array::from_fn(|i| y[i] + k[i] * h)
}

/// Right-hand side `y' = f(t, y)`.
pub trait VectorField {
    fn eval(&self, t: f64, y: &State) -> State;
}

impl<F: Fn(f64, &State) -> State> VectorField for F {
    fn eval(&self, t: f64, y: &State) -> State {
        self(t, y)
    }
}

fn rk4_step<F: VectorField>(f: &F, t: f64, y: &State, h: f64) -> State {
    let k1 = f.eval(t, y);
    let k2 = f.eval(t + 0.5 * h, &axpy(y, 0.5 * h, &k1));
    let k3 = f.eval(t + 0.5 * h, &axpy(y, 0.5 * h, &k2));
    let k4 = f.eval(t + h, &axpy(y, h, &k3));
    core::array::from_fn(|i| y[i] + (k1[i] + (k2[i] + k3[i]) * 2.0 + k4[i]) * (h / 6.0))
}

/// Adaptive integrator for `y' = f(t, y)` on the four-amplitude state.
pub struct Integrator<F> {
    f: F,
    t: f64,
    y: State,
    h: f64,
    tol: f64,
}

impl<F: VectorField> Integrator<F> {
    pub fn new(f: F, y0: State, h0: f64, tol: f64) -> Self {
        Self {
            f,
            t: 0.0,
            y: y0,
            h: h0,
            tol,
        }
    }

    pub fn time(&self) -> f64 {
        self.t
    }

    pub fn state(&self) -> &State {
        &self.y
    }

    pub fn derivative(&self) -> State {
        self.f.eval(self.t, &self.y)
    }

    /// Advances exactly to `target`, with the last substep clamped onto it.
    pub fn advance_to(&mut self, target: f64) -> Result<(), DynamicsError> {
        while self.t < target {
            let remaining = target - self.t;
            let last = self.h >= remaining;
            let h = if last { remaining } else { self.h };
            let full = rk4_step(&self.f, self.t, &self.y, h);
            let half = rk4_step(&self.f, self.t, &self.y, 0.5 * h);
            let two = rk4_step(&self.f, self.t + 0.5 * h, &half, 0.5 * h);
            // `f64::max` skips NaN, so a non-finite estimate is mapped to ∞.
            let err = (0..4)
                .map(|i| (two[i] - full[i]).norm())
                .map(|e| if e.is_finite() { e } else { f64::INFINITY })
                .fold(0.0, f64::max)
                / 15.0;
            let scale = self.y.iter().map(|v| v.norm()).fold(1.0, f64::max);
            let limit = self.tol * scale;
            if err <= limit {
                self.y = core::array::from_fn(|i| two[i] + (two[i] - full[i]) / 15.0);
                self.t = if last { target } else { self.t + h };
                let grow = if err == 0.0 {
                    4.0
                } else {
                    (0.9 * fifth_root(limit / err)).clamp(0.2, 4.0)
                };
                // A clamped final step says nothing about the natural step.
                if !last || grow < 1.0 {
                    self.h = h * grow;
                }
            } else {
                let shrink = if err.is_finite() {
                    (0.9 * fifth_root(limit / err)).clamp(0.1, 0.9)
                } else {
                    0.1
                };
                self.h = h * shrink;
                if self.h < MIN_RELATIVE_STEP * self.t.max(1.0) {
                    return Err(DynamicsError::StepSizeUnderflow { time: self.t });
                }
            }
        }
        Ok(())
    }
}

fn fifth_root(x: f64) -> f64 {
    libm::pow(x, 0.2)
}
