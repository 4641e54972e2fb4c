//! Exact per-mode solution operator of the damped linear wave equation, the
//! measure-driven Duhamel formula and linear decay/Strichartz diagnostics.

mod block;
mod diagnostics;
mod linear;

pub use block::{classify, delta_star, energy_operator_norm, mode_block, mul as block_mul, Block, Branch, IDENTITY};
pub use diagnostics::{
    damped_variation, diagnostics_csv, fit_decay, linear_diagnostics, majorant_stable, DiagnosticRow, LinearReport, LinearRun,
};
pub use linear::{ForcingTrack, LinearPropagator};
