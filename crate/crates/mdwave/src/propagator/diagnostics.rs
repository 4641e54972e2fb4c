use super::linear::{ForcingTrack, LinearPropagator};
use crate::measure::VectorMeasure;
use crate::numerics::{gl8, ls_slope};
use crate::spectral::{window_series, Exponent, StatePair};
use crate::{Error, Result};

/// Uniformly sampled linear solution with its `L¹²` norms.
#[derive(Clone, Debug)]
pub struct LinearRun {
    pub gamma: f64,
    pub times: Vec<f64>,
    pub states: Vec<StatePair>,
    pub l12: Vec<f64>,
    pub initial_norm: f64,
    pub measure: VectorMeasure,
}

impl LinearRun {
    /// Samples `ξ(t)` (left limits) at `samples + 1` uniform times over the measure interval.
    pub fn compute(prop: &LinearPropagator, xi: &StatePair, mu: &VectorMeasure, samples: usize) -> Result<Self> {
        if samples < 2 {
            return Err(Error::precondition("a linear run needs at least 2 intervals"));
        }
        let (a, b) = mu.interval();
        let track = ForcingTrack::new(prop.grid(), mu)?;
        let dt = (b - a) / samples as f64;
        let mut times = Vec::with_capacity(samples + 1);
        let mut states = Vec::with_capacity(samples + 1);
        let mut cur = xi.clone();
        let mut prev = a;
        for i in 0..=samples {
            let t = if i == samples { b } else { a + i as f64 * dt };
            cur = prop.duhamel_track(&cur, &track, prev, t)?;
            times.push(t);
            states.push(cur.clone());
            prev = t;
        }
        let l12 = states.iter().map(|s| s.u.norm_lp(Exponent::P(12.0))).collect();
        Ok(Self { gamma: prop.gamma(), times, states, l12, initial_norm: xi.energy_norm(), measure: mu.clone() })
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct DiagnosticRow {
    pub t: f64,
    pub energy: f64,
    pub majorant: f64,
    pub strichartz: Option<f64>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct LinearReport {
    pub delta: f64,
    /// `sup ‖ξ(t)‖_E / m(t)` with `m(t) = ‖ξ_τ‖e^{−δ(t−τ)} + ∫_{[τ,t)} e^{−δ(t−s)} |μ|(ds)`.
    pub energy_constant: f64,
    /// `sup_t ‖u‖_{L⁴(t,t+1; L¹²)} / (‖ξ_τ‖_E + ‖μ‖_TV)`.
    pub strichartz_constant: f64,
    /// `−slope` of `log ‖ξ‖_E` over the second half of a forcing-free run.
    pub decay_rate: Option<f64>,
    pub rows: Vec<DiagnosticRow>,
}

/// `∫_{[τ,t)} e^{−δ(t−s)} |μ|(ds)`.
pub fn damped_variation(mu: &VectorMeasure, delta: f64, t: f64) -> f64 {
    let mut acc: f64 = mu.atoms().iter().filter(|a| a.time < t).map(|a| (-delta * (t - a.time)).exp() * a.value.norm()).sum();
    let (x, w) = gl8();
    for seg in mu.segments() {
        let (p0, p1) = (seg.t0, seg.t1.min(t));
        if p1 <= p0 {
            continue;
        }
        let pieces = ((p1 - p0) / 0.25).ceil().max(1.0) as usize;
        let h = (p1 - p0) / pieces as f64;
        for j in 0..pieces {
            let lo = p0 + j as f64 * h;
            for (xi, wi) in x.iter().zip(w) {
                let r = lo + 0.5 * h * (xi + 1.0);
                acc += 0.5 * h * wi * (-delta * (t - r)).exp() * seg.at(r).norm();
            }
        }
    }
    acc
}

/// `−slope` of the least-squares fit of `log n(t)` over `t ∈ [from, to]`.
pub fn fit_decay(times: &[f64], norms: &[f64], from: f64, to: f64) -> Option<f64> {
    let (x, y): (Vec<f64>, Vec<f64>) = times
        .iter()
        .zip(norms)
        .filter(|(t, n)| **t >= from && **t <= to && **n > 0.0)
        .map(|(t, n)| (*t, n.ln()))
        .unzip();
    if x.len() < 3 {
        return None;
    }
    Some(-ls_slope(&x, &y))
}

pub fn linear_diagnostics(run: &LinearRun) -> LinearReport {
    let delta = super::block::delta_star(run.gamma);
    let tau = run.times[0];
    let energies: Vec<f64> = run.states.iter().map(StatePair::energy_norm).collect();
    let majorants: Vec<f64> = run
        .times
        .iter()
        .map(|&t| run.initial_norm * (-delta * (t - tau)).exp() + damped_variation(&run.measure, delta, t))
        .collect();
    let energy_constant = energies
        .iter()
        .zip(&majorants)
        .filter(|(_, m)| **m > 0.0)
        .map(|(e, m)| e / m)
        .fold(0.0, f64::max);
    let dt = run.times[1] - run.times[0];
    let windows = window_series(tau, dt, &run.l12, 1.0, 4.0);
    let base = run.initial_norm + run.measure.total_variation();
    let strichartz_constant =
        if base > 0.0 { windows.iter().map(|(_, w)| w / base).fold(0.0, f64::max) } else { 0.0 };
    let decay_rate = if run.measure.is_zero() && run.initial_norm > 0.0 {
        let end = *run.times.last().expect("samples");
        fit_decay(&run.times, &energies, 0.5 * (tau + end), end)
    } else {
        None
    };
    let rows = run
        .times
        .iter()
        .enumerate()
        .map(|(i, &t)| DiagnosticRow { t, energy: energies[i], majorant: majorants[i], strichartz: windows.get(i).map(|w| w.1) })
        .collect();
    LinearReport { delta, energy_constant, strichartz_constant, decay_rate, rows }
}

/// Monotone-majorant structure across resolutions: fitted constants within a factor 2.
pub fn majorant_stable(constants: &[f64]) -> bool {
    let lo = constants.iter().copied().fold(f64::INFINITY, f64::min);
    let hi = constants.iter().copied().fold(0.0, f64::max);
    constants.is_empty() || hi == 0.0 || (lo > 0.0 && hi / lo <= 2.0)
}

/// CSV with columns `t, energy, bound, window_strichartz`.
pub fn diagnostics_csv(report: &LinearReport) -> String {
    let mut out = String::from("t,energy,bound,window_strichartz\n");
    for r in &report.rows {
        let w = r.strichartz.map_or(String::new(), |x| format!("{x:e}"));
        out.push_str(&format!("{:e},{:e},{:e},{}\n", r.t, r.energy, report.energy_constant * r.majorant, w));
    }
    out
}
