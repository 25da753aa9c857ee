//! Spontaneous-emission spectra and field-generated-coherence trapping for
//! driven four-amplitude atomic loops.
//!
//! Two independent routes compute the emission amplitudes:
//!
//! * [`spectrum`]: closed-form Laplace-domain amplitudes over the monic
//!   characteristic quartic, with a pole–residue decomposition of each branch.
//! * [`dynamics`]: adaptive Runge–Kutta propagation of the amplitude equations
//!   followed by oscillatory quadrature of the emission integrals.
//!
//! [`trapping`] evaluates the dark-state conditions and [`analysis`] turns
//! spectra into peaks, areas and conservation checks.
//!
//! The crate is `no_std` and only needs `alloc`.

#![cfg_attr(not(test), no_std)]

extern crate alloc;

pub mod analysis;
pub mod dynamics;
pub mod linalg;
pub mod math;
pub mod model;
pub mod poly;
pub mod preset;
pub mod spectrum;
pub mod trapping;
pub mod validation;

pub use math::Complex64;
pub use model::{D1System, D2System, DriveField, InitialState, Level, ModelError};
