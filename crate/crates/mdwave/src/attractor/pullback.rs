use rayon::prelude::*;
use serde::Serialize;

use crate::dynamics::{ode_simulate, OdeOptions, ScalarModel, SolverConfig, WaveModel};
use crate::measure::GlobalMeasure;
use crate::spectral::StatePair;
use crate::Result;

/// Symmetric Hausdorff distance between finite sets under `dist`.
pub fn hausdorff<T>(a: &[T], b: &[T], dist: impl Fn(&T, &T) -> f64) -> f64 {
    if a.is_empty() || b.is_empty() {
        return if a.is_empty() && b.is_empty() { 0.0 } else { f64::INFINITY };
    }
    let one_way = |x: &[T], y: &[T]| {
        x.iter().map(|p| y.iter().map(|q| dist(p, q)).fold(f64::INFINITY, f64::min)).fold(0.0, f64::max)
    };
    one_way(a, b).max(one_way(b, a))
}

/// Largest pairwise distance.
pub fn diameter<T>(a: &[T], dist: impl Fn(&T, &T) -> f64) -> f64 {
    let mut d: f64 = 0.0;
    for i in 0..a.len() {
        for j in i + 1..a.len() {
            d = d.max(dist(&a[i], &a[j]));
        }
    }
    d
}

/// `U_{T(h)μ}(0, −T_k)B` for every horizon and hull member.
#[derive(Clone, Debug)]
pub struct EnsembleImage {
    pub horizons: Vec<f64>,
    pub shifts: Vec<f64>,
    /// `images[k][m]`: image of the initial set at horizon `k` for member `m`.
    pub images: Vec<Vec<Vec<StatePair>>>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PullbackReport {
    pub horizons: Vec<f64>,
    /// Largest over members of the E-norm Hausdorff distance between successive horizons.
    pub successive_energy: Vec<f64>,
    /// Same in `H × H^{−1}`.
    pub successive_weak: Vec<f64>,
    /// Largest image diameter over members, per horizon.
    pub diameters: Vec<f64>,
    /// Largest image norm over members, per horizon.
    pub radii: Vec<f64>,
}

pub fn pullback_attractor(
    model: &WaveModel,
    mu: &GlobalMeasure,
    initial: &[StatePair],
    horizons: &[f64],
    shifts: &[f64],
    cfg: &SolverConfig,
) -> Result<(EnsembleImage, PullbackReport)> {
    let jobs: Vec<(usize, usize, usize)> = (0..horizons.len())
        .flat_map(|k| (0..shifts.len()).flat_map(move |m| (0..initial.len()).map(move |i| (k, m, i))))
        .collect();
    let finals: Vec<StatePair> = jobs
        .par_iter()
        .map(|&(k, m, i)| {
            let z = mu.shift(shifts[m]);
            model.simulate(&initial[i], -horizons[k], 0.0, &z, cfg).map(|t| t.final_state().clone())
        })
        .collect::<Result<Vec<_>>>()?;
    let mut images = vec![vec![Vec::with_capacity(initial.len()); shifts.len()]; horizons.len()];
    for (&(k, m, _), s) in jobs.iter().zip(finals) {
        images[k][m].push(s);
    }
    let energy = |a: &StatePair, b: &StatePair| a.sub(b).energy_norm();
    let weak = |a: &StatePair, b: &StatePair| a.sub(b).weak_norm();
    let mut successive_energy = Vec::new();
    let mut successive_weak = Vec::new();
    for k in 1..horizons.len() {
        let (mut e, mut w) = (0.0f64, 0.0f64);
        for m in 0..shifts.len() {
            e = e.max(hausdorff(&images[k - 1][m], &images[k][m], energy));
            w = w.max(hausdorff(&images[k - 1][m], &images[k][m], weak));
        }
        successive_energy.push(e);
        successive_weak.push(w);
    }
    let diameters = images.iter().map(|per| per.iter().map(|img| diameter(img, energy)).fold(0.0, f64::max)).collect();
    let radii = images
        .iter()
        .map(|per| per.iter().flatten().map(StatePair::energy_norm).fold(0.0, f64::max))
        .collect();
    let report = PullbackReport { horizons: horizons.to_vec(), successive_energy, successive_weak, diameters, radii };
    Ok((EnsembleImage { horizons: horizons.to_vec(), shifts: shifts.to_vec(), images }, report))
}

/// Pullback images `y_h(0)` of the scalar model from `−T_k` for each hull shift; returns
/// `(horizon, min, max)` over all shifts and initial values.
pub fn scalar_pullback(
    model: &ScalarModel,
    initial: &[f64],
    horizons: &[f64],
    shifts: &[f64],
    opts: &OdeOptions,
) -> Result<Vec<(f64, f64, f64)>> {
    horizons
        .iter()
        .map(|&tk| {
            let vals: Vec<f64> = shifts
                .par_iter()
                .flat_map_iter(|&h| {
                    let m = model.shift(h);
                    initial.iter().map(move |&y0| ode_simulate(&m, y0, -tk, 0.0, opts).map(|t| t.last())).collect::<Vec<_>>()
                })
                .collect::<Result<Vec<_>>>()?;
            let lo = vals.iter().copied().fold(f64::INFINITY, f64::min);
            let hi = vals.iter().copied().fold(f64::NEG_INFINITY, f64::max);
            Ok((tk, lo, hi))
        })
        .collect()
}
