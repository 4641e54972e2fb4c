//! Non-atomicity diagnostics: the weak uniform modulus of a global measure and the
//! equi-integrability modulus of a family of absolutely continuous measures.

use super::{finite::linear_norm_integral, GlobalMeasure, HilbertVector, VectorMeasure};
use crate::{Error, Result};

/// `max_s |(μ([s, s+h]), ψ)|` over the sampled shifts.
pub fn wna_modulus(g: &GlobalMeasure, psi: &HilbertVector, h: f64, shifts: &[f64]) -> Result<f64> {
    if !(h > 0.0) {
        return Err(Error::precondition("window length must be positive"));
    }
    let mut best: f64 = 0.0;
    for &s in shifts {
        let w = g.window(s, s + h)?;
        best = best.max(w.mass().dot(psi).abs());
    }
    Ok(best)
}

/// Modulus sampled at `h = 1, 1/2, …, 2^-levels` with shifts on a uniform grid of
/// spacing `h / per_window` covering `range`.
#[derive(Clone, Debug)]
pub struct WnaProfile {
    pub windows: Vec<f64>,
    pub moduli: Vec<f64>,
    pub ratio: f64,
    pub threshold: f64,
    pub non_atomic: bool,
}

/// Default empirical threshold: `modulus(2^-10) < 0.01 · modulus(1)`.
pub const WNA_THRESHOLD: f64 = 0.01;

pub fn wna_profile(
    g: &GlobalMeasure,
    psi: &HilbertVector,
    range: (f64, f64),
    per_window: usize,
    levels: u32,
    threshold: f64,
) -> Result<WnaProfile> {
    let mut windows = Vec::new();
    let mut moduli = Vec::new();
    for l in 0..=levels {
        let h = 0.5f64.powi(l as i32);
        let step = h / per_window.max(1) as f64;
        let count = ((range.1 - range.0) / step).ceil() as usize;
        let shifts: Vec<f64> = (0..=count).map(|i| range.0 + i as f64 * step).collect();
        windows.push(h);
        moduli.push(wna_modulus(g, psi, h, &shifts)?);
    }
    let first = moduli[0];
    let last = *moduli.last().unwrap();
    let ratio = if first > 0.0 { last / first } else { 0.0 };
    Ok(WnaProfile { windows, moduli, ratio, threshold, non_atomic: last <= threshold * first })
}

/// `ω(h)`: largest `∫_A ‖ρ‖` over unions `A` of grid cells with total length `h`,
/// maximised over the family. Cells have width `min(h) / 16`.
pub fn equi_integrability_modulus(measures: &[VectorMeasure], windows: &[f64]) -> Result<Vec<(f64, f64)>> {
    if measures.iter().any(|m| !m.is_absolutely_continuous()) {
        return Err(Error::precondition("equi-integrability needs purely absolutely continuous measures"));
    }
    let mut out: Vec<(f64, f64)> = windows.iter().map(|&h| (h, 0.0)).collect();
    if measures.is_empty() || windows.is_empty() {
        return Ok(out);
    }
    let hmin = windows.iter().cloned().fold(f64::INFINITY, f64::min);
    let cell = hmin / 16.0;
    for m in measures {
        let (a, b) = m.interval();
        let n = ((b - a) / cell).ceil().max(1.0) as usize;
        let width = (b - a) / n as f64;
        let mut masses = vec![0.0; n];
        for seg in m.segments() {
            let first = (((seg.t0 - a) / width).floor().max(0.0) as usize).min(n - 1);
            let last = (((seg.t1 - a) / width).ceil() as usize).min(n);
            for (k, slot) in masses.iter_mut().enumerate().take(last).skip(first) {
                let lo = seg.t0.max(a + k as f64 * width);
                let hi = seg.t1.min(a + (k + 1) as f64 * width);
                if hi > lo {
                    *slot += linear_norm_integral(&seg.at(lo), &seg.at(hi), hi - lo);
                }
            }
        }
        masses.sort_by(|x, y| y.total_cmp(x));
        for (h, w) in out.iter_mut() {
            let full = (*h / width).floor() as usize;
            let mut acc: f64 = masses.iter().take(full).sum();
            if full < masses.len() {
                acc += masses[full] * (*h / width - full as f64);
            }
            *w = w.max(acc);
        }
    }
    Ok(out)
}
