//! Nonautonomous experiments: hull samples, the translation identity, pullback
//! images, kernel sections of the scalar model, the regularity splitting, the
//! atom cascade, the energy-to-Strichartz scan and the fractional product bounds.

mod cascade;
mod hull;
mod inequality;
mod kernel;
mod pullback;
mod scan;
mod splitting;
mod weak;

pub use cascade::{strichartz_cascade, CascadeReport};
pub use hull::{translation_identity_check, HullSample};
pub use inequality::{
    gronwall_verify, kato_ponce_check, kato_ponce_pair, kato_ponce_ratios, GronwallCheck, KatoPonceReport, RatioRow,
    PRODUCT_PADDING,
};
pub use kernel::{cubic_attractor, kernel_vs_attractor, KernelConfig, KernelReport};
pub use pullback::{diameter, hausdorff, pullback_attractor, scalar_pullback, EnsembleImage, PullbackReport};
pub use scan::{energy_to_strichartz_scan, ScanReport, ScanRow};
pub use splitting::{
    coercive, coercivity_threshold, split_evolve, splitting_run, SplitTrajectory, SplittingConfig, SplittingReport,
    COERCIVITY_RANGE,
};
pub use weak::{weak_star_distance, TestFamily};

#[cfg(test)]
mod tests;
