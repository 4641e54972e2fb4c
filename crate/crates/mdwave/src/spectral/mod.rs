//! Real fields on the torus in truncated Fourier form, their Sobolev/Lebesgue norms,
//! Strichartz windows and the dealiased nonlinearity.

mod field;
mod grid;
pub mod io;
mod nonlinearity;
mod strichartz;

pub use field::{full_spectrum, grid_lp, sample_norm_hs, Exponent, SpectralField, StatePair};
pub use grid::{BasisEntry, BasisKind, Grid, ModeGrid};
pub use nonlinearity::{Nonlinearity, Perturbation};
pub use strichartz::{strichartz_window, window_norm, window_series, StrichartzPair};

#[cfg(test)]
mod tests;
