//! Spectral simulation of the damped quintic wave equation on the torus driven by
//! Hilbert-valued measures with atoms.
//!
//! The crate is organised bottom-up: [`measure`] holds the forcing representation,
//! [`spectral`] the Fourier fields and norms, [`propagator`] the exact linear flow,
//! [`dynamics`] the nonlinear stepper and energy ledger, and [`attractor`] the
//! nonautonomous experiments built on top of them.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod attractor;
pub mod dynamics;
pub mod error;
pub mod measure;
pub mod numerics;
pub mod propagator;
pub mod sampling;
pub mod spectral;

pub use error::{Error, Result};
