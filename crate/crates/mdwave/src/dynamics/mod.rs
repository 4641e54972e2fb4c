//! Nonlinear time integration with measure forcing, the energy ledger and the
//! stability/dissipativity diagnostics, plus a scalar first-order reference model.

mod analysis;
mod ledger;
pub mod ode;
mod solver;

pub use analysis::{
    continuous_dependence, dependence_from_runs, dissipativity_from_runs, dissipativity_scan, DependenceReport,
    DissipativityReport, MemberSummary, DEPENDENCE_LIMIT,
};
pub use ledger::{
    b_form, b_min_eigenvalue, default_delta, ledger, perturbed_energy, perturbed_report, AtomRecord, EnergyLedger,
    IntervalRecord, PerturbedReport,
};
pub use ode::{dopri5, ode_simulate, OdeOptions, ScalarModel, ScalarTrajectory};
pub use solver::{schedule, SolverConfig, Trajectory, WaveModel};
