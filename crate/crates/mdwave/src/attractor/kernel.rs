use rayon::prelude::*;
use serde::Serialize;

use crate::dynamics::{ode_simulate, OdeOptions, ScalarModel};
use crate::Result;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct KernelConfig {
    /// Spike spacing `K`; `None` runs the unperturbed arctan model.
    pub spikes: Option<f64>,
    /// Initial values swept for the uniform attractor.
    pub initial_values: Vec<f64>,
    /// Spike epochs `n` whose neighbourhoods `Kn` seed start times (also used for late times without spikes).
    pub epochs: Vec<u64>,
    /// Negative start times sampling the lower hull end.
    pub early_starts: Vec<f64>,
    /// Time allowed for transients before values are recorded.
    pub transient: f64,
    /// Absolute start of the pullback run for the kernels.
    pub pullback_start: f64,
    /// End of the pullback run (should cover several spike epochs).
    pub pullback_end: f64,
    pub options: OdeOptions,
}

impl KernelConfig {
    pub fn new(spikes: Option<f64>) -> Self {
        Self {
            spikes,
            initial_values: (0..=10).map(|i| -3.0 + 0.5 * i as f64).collect(),
            epochs: vec![4, 10, 20, 40],
            early_starts: vec![-2000.0, -500.0, -100.0],
            transient: 15.0,
            pullback_start: -400.0,
            pullback_end: 1000.0,
            options: OdeOptions::default(),
        }
    }

    fn model(&self) -> ScalarModel {
        match self.spikes {
            Some(k) => ScalarModel::arctan_kicked(k),
            None => ScalarModel::arctan(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct KernelReport {
    /// Estimate of the uniform attractor `[min, max]`.
    pub attractor: (f64, f64),
    /// Estimate of the union of kernel sections over the hull.
    pub kernel_union: (f64, f64),
    /// `attractor.max − kernel_union.max`.
    pub gap: f64,
}

fn merge(a: (f64, f64), b: (f64, f64)) -> (f64, f64) {
    (a.0.min(b.0), a.1.max(b.1))
}

/// Estimates the uniform attractor from forward sweeps and the kernel union from pullback.
pub fn kernel_vs_attractor(cfg: &KernelConfig) -> Result<KernelReport> {
    let model = cfg.model();
    let k = cfg.spikes.unwrap_or(50.0);
    let window = 2.0 * cfg.transient;
    // hull members through shifts: epochs at late times, plus early starts, plus the frozen endpoints
    let mut starts: Vec<(ScalarModel, f64)> = cfg
        .epochs
        .iter()
        .map(|&n| (model.clone(), k * n as f64 - cfg.transient - 1.0))
        .chain(cfg.early_starts.iter().map(|&t| (model.clone(), t)))
        .collect();
    starts.push((ScalarModel::constant(3.0), 0.0));
    starts.push((ScalarModel::constant(-3.0), 0.0));
    let ranges: Vec<(f64, f64)> = starts
        .par_iter()
        .flat_map_iter(|(m, t0)| {
            cfg.initial_values.iter().map(move |&y0| {
                let tr = ode_simulate(m, y0, *t0, t0 + cfg.transient + window, &cfg.options)?;
                Ok(tr.range_after(t0 + cfg.transient))
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let attractor = ranges.into_iter().fold((f64::INFINITY, f64::NEG_INFINITY), merge);

    // kernel of every non-endpoint member: pullback collapses onto one complete trajectory,
    // whose range over time is the union of its shifts' sections
    let pulled: Vec<(f64, f64)> = cfg
        .initial_values
        .par_iter()
        .map(|&y0| {
            let tr = ode_simulate(&model, y0, cfg.pullback_start, cfg.pullback_end, &cfg.options)?;
            Ok(tr.range_after(cfg.pullback_start + cfg.transient))
        })
        .collect::<Result<Vec<_>>>()?;
    let mut kernel = pulled.into_iter().fold((f64::INFINITY, f64::NEG_INFINITY), merge);
    // frozen endpoints: autonomous attractors
    for c in [3.0, -3.0] {
        let m = ScalarModel::constant(c);
        for &y0 in &cfg.initial_values {
            let tr = ode_simulate(&m, y0, 0.0, cfg.transient + window, &cfg.options)?;
            kernel = merge(kernel, tr.range_after(cfg.transient));
        }
    }
    Ok(KernelReport { attractor, kernel_union: kernel, gap: attractor.1 - kernel.1 })
}

/// Attractor of `y' = y − y³` from forward sweeps.
pub fn cubic_attractor(initial: &[f64], transient: f64, opts: &OdeOptions) -> Result<(f64, f64)> {
    let m = ScalarModel::cubic();
    let mut r = (f64::INFINITY, f64::NEG_INFINITY);
    for &y0 in initial {
        r = merge(r, ode_simulate(&m, y0, 0.0, 2.0 * transient, opts)?.range_after(transient));
    }
    Ok(r)
}
