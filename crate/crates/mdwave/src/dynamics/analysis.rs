use rayon::prelude::*;
use serde::Serialize;

use super::solver::{SolverConfig, Trajectory, WaveModel};
use crate::measure::GlobalMeasure;
use crate::numerics::median;
use crate::spectral::StatePair;
use crate::Result;

/// Largest admissible exponent constant before the dependence estimate is flagged.
pub const DEPENDENCE_LIMIT: f64 = 100.0;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DependenceReport {
    pub times: Vec<f64>,
    pub differences: Vec<f64>,
    /// `∫_τ^t (1 + ‖u₁‖⁴_{L¹²} + ‖u₂‖⁴_{L¹²}) ds`.
    pub exponents: Vec<f64>,
    /// Smallest `C ≥ 0` with `‖ξ₁−ξ₂‖(t) ≤ e^{C·I(t)} ‖ξ₁−ξ₂‖(τ)` on all samples.
    pub fitted_constant: f64,
    pub holds: bool,
}

/// Runs both initial data with the same forcing and fits the exponential stability constant.
pub fn continuous_dependence(
    model: &WaveModel,
    xi1: &StatePair,
    xi2: &StatePair,
    mu: &GlobalMeasure,
    tau: f64,
    t_end: f64,
    cfg: &SolverConfig,
) -> Result<DependenceReport> {
    let (a, b) = rayon::join(
        || model.simulate(xi1, tau, t_end, mu, cfg),
        || model.simulate(xi2, tau, t_end, mu, cfg),
    );
    let (a, b) = (a?, b?);
    Ok(dependence_from_runs(&a, &b))
}

pub fn dependence_from_runs(a: &Trajectory, b: &Trajectory) -> DependenceReport {
    let n = a.len().min(b.len());
    let differences: Vec<f64> = (0..n).map(|i| a.states[i].sub(&b.states[i]).energy_norm()).collect();
    let mut exponents = vec![0.0; n];
    for i in 1..n {
        let dt = a.times[i] - a.times[i - 1];
        let g = |j: usize| 1.0 + a.l12[j].powi(4) + b.l12[j].powi(4);
        exponents[i] = exponents[i - 1] + 0.5 * dt * (g(i - 1) + g(i));
    }
    let d0 = differences[0];
    let mut c: f64 = 0.0;
    let mut holds = true;
    for i in 1..n {
        if d0 == 0.0 {
            if differences[i] != 0.0 {
                holds = false;
            }
            continue;
        }
        if differences[i] > d0 {
            c = c.max((differences[i] / d0).ln() / exponents[i]);
        }
    }
    holds &= c.is_finite() && c <= DEPENDENCE_LIMIT;
    DependenceReport { times: a.times[..n].to_vec(), differences, exponents, fitted_constant: c, holds }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct MemberSummary {
    pub initial_norm: f64,
    pub post_transient_sup: f64,
    /// First sample time after which the norm stays inside the common ball.
    pub entry_time: f64,
    pub window_max: f64,
    pub window_median: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DissipativityReport {
    pub transient: f64,
    pub radius: f64,
    /// `(max − min)/max` of the post-transient suprema.
    pub spread: f64,
    pub members: Vec<MemberSummary>,
    /// max/median of all post-transient unit-window Strichartz norms, per member worst case.
    pub window_ratio: f64,
    pub absorbed: bool,
}

/// Ensemble run from every initial datum; everything after `transient` is compared
/// against the common ball `R = max sup_{t ≥ transient} ‖ξ(t)‖_E`.
pub fn dissipativity_scan(
    model: &WaveModel,
    ics: &[StatePair],
    mu: &GlobalMeasure,
    tau: f64,
    t_end: f64,
    transient: f64,
    cfg: &SolverConfig,
) -> Result<DissipativityReport> {
    let runs: Vec<Trajectory> =
        ics.par_iter().map(|xi| model.simulate(xi, tau, t_end, mu, cfg)).collect::<Result<Vec<_>>>()?;
    Ok(dissipativity_from_runs(&runs, transient))
}

pub fn dissipativity_from_runs(runs: &[Trajectory], transient: f64) -> DissipativityReport {
    let sups: Vec<f64> = runs
        .iter()
        .map(|r| {
            r.times.iter().zip(&r.energy_norms).filter(|(t, _)| **t >= transient).map(|(_, e)| *e).fold(0.0, f64::max)
        })
        .collect();
    let radius = sups.iter().copied().fold(0.0, f64::max);
    let low = sups.iter().copied().fold(f64::INFINITY, f64::min);
    let spread = if radius > 0.0 { (radius - low) / radius } else { 0.0 };
    let mut window_ratio: f64 = 0.0;
    let mut absorbed = true;
    let members = runs
        .iter()
        .zip(&sups)
        .map(|(r, &sup)| {
            let mut entry = r.times[0];
            for (t, e) in r.times.iter().zip(&r.energy_norms) {
                if *e > radius * (1.0 + 1e-12) {
                    entry = *t;
                }
            }
            absorbed &= entry <= transient;
            let windows: Vec<f64> = r.window_series(transient, 0.5).into_iter().map(|w| w.1).collect();
            let wmax = windows.iter().copied().fold(0.0, f64::max);
            let wmed = if windows.is_empty() { 0.0 } else { median(&windows) };
            if wmed > 0.0 {
                window_ratio = window_ratio.max(wmax / wmed);
            }
            MemberSummary {
                initial_norm: r.energy_norms[0],
                post_transient_sup: sup,
                entry_time: entry,
                window_max: wmax,
                window_median: wmed,
            }
        })
        .collect();
    DissipativityReport { transient, radius, spread, members, window_ratio, absorbed }
}
