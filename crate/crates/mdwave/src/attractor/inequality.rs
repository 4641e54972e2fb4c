use rand::Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::sampling::{member_rng, random_field};
use crate::spectral::{sample_norm_hs, Exponent, ModeGrid, SpectralField};
use crate::{Error, Result};

/// Padding that keeps the spectrum of a quintic product alias-free.
pub const PRODUCT_PADDING: usize = 6;

/// Largest LHS/RHS ratio per inequality at one resolution.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RatioRow {
    pub cutoff: usize,
    /// `‖f(v+w) − f(v)‖_{H^α}` against its product bound, `f = u⁵`.
    pub difference: f64,
    /// `‖h(v)w‖_{H^α}` against `(1+‖v‖^{4−α}_{L¹²})(1+‖v‖^α_{H¹})·W`, `h = 5u⁴`.
    pub product: f64,
    /// Same product against `(1+‖v‖_{L¹²})^{4−α}‖v‖^α_{H¹}·W`.
    pub vanishing: f64,
    pub skipped: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct KatoPonceReport {
    pub alpha: f64,
    pub samples: usize,
    pub rows: Vec<RatioRow>,
    /// `max/min` of each column across resolutions.
    pub spread: [f64; 3],
    pub stable: bool,
}

struct Norms {
    l12: f64,
    h1: f64,
}

fn norms(u: &SpectralField) -> Norms {
    Norms { l12: u.norm_lp(Exponent::P(12.0)), h1: u.norm_hs(1.0) }
}

fn ratio(lhs: f64, rhs: f64) -> Option<f64> {
    (rhs > 0.0).then(|| lhs / rhs)
}

/// Ratios for one pair; `None` entries have a vanishing right-hand side.
pub fn kato_ponce_ratios(v: &SpectralField, w: &SpectralField, alpha: f64) -> Result<[Option<f64>; 3]> {
    let g = v.grid();
    let (pv, pw) = (v.to_physical(), w.to_physical());
    let diff: Vec<f64> = pv.iter().zip(&pw).map(|(a, b)| (a + b).powi(5) - a.powi(5)).collect();
    let prod: Vec<f64> = pv.iter().zip(&pw).map(|(a, b)| 5.0 * a.powi(4) * b).collect();
    let lhs_diff = sample_norm_hs(g, &diff, alpha)?;
    let lhs_prod = sample_norm_hs(g, &prod, alpha)?;
    let (nv, nw) = (norms(v), norms(w));
    let wfac = w.norm_hs(1.0 + alpha).powf(1.0 - alpha) * w.norm_hap(alpha, Exponent::P(12.0)).powf(alpha);
    let rhs_diff = (1.0 + nv.l12 + nw.l12).powf(4.0 - alpha) * (1.0 + nv.h1 + nw.h1).powf(alpha) * wfac;
    let rhs_prod = (1.0 + nv.l12.powf(4.0 - alpha)) * (1.0 + nv.h1.powf(alpha)) * wfac;
    let rhs_van = (1.0 + nv.l12).powf(4.0 - alpha) * nv.h1.powf(alpha) * wfac;
    Ok([ratio(lhs_diff, rhs_diff), ratio(lhs_prod, rhs_prod), ratio(lhs_prod, rhs_van)])
}

/// Random pair `i`: amplitudes in `[0.1, 3]`, spectra decaying like `(1+|k|²)^{−3/2}`.
/// Streams are drawn mode by mode in eigenvalue order, so coarser grids see the
/// leading coefficients of finer ones.
pub fn kato_ponce_pair(grid: &crate::spectral::Grid, seed: u64, i: u64) -> (SpectralField, SpectralField) {
    let mut rv = member_rng(seed, 2 * i);
    let mut rw = member_rng(seed, 2 * i + 1);
    let av: f64 = rv.gen_range(0.1..=3.0);
    let aw: f64 = rw.gen_range(0.1..=3.0);
    (random_field(grid, &mut rv, 1.5).scale(av), random_field(grid, &mut rw, 1.5).scale(aw))
}

/// Max ratio tables over `samples` random pairs per cutoff, `d = 1`.
pub fn kato_ponce_check(cutoffs: &[usize], samples: usize, alpha: f64, seed: u64) -> Result<KatoPonceReport> {
    if !(alpha > 0.0 && alpha <= 0.4) {
        return Err(Error::precondition(format!("α = {alpha} outside (0, 2/5]")));
    }
    let rows: Vec<RatioRow> = cutoffs
        .iter()
        .map(|&n| {
            let g = ModeGrid::new(1, n, PRODUCT_PADDING)?;
            let per: Vec<[Option<f64>; 3]> = (0..samples as u64)
                .into_par_iter()
                .map(|i| {
                    let (v, w) = kato_ponce_pair(&g, seed, i);
                    kato_ponce_ratios(&v, &w, alpha)
                })
                .collect::<Result<_>>()?;
            let col = |j: usize| per.iter().filter_map(|r| r[j]).fold(0.0, f64::max);
            let skipped = per.iter().filter(|r| r.iter().any(Option::is_none)).count();
            Ok(RatioRow { cutoff: n, difference: col(0), product: col(1), vanishing: col(2), skipped })
        })
        .collect::<Result<_>>()?;
    let spread_of = |f: &dyn Fn(&RatioRow) -> f64| {
        let hi = rows.iter().map(f).fold(0.0, f64::max);
        let lo = rows.iter().map(f).fold(f64::INFINITY, f64::min);
        if lo > 0.0 { hi / lo } else { f64::INFINITY }
    };
    let spread = [spread_of(&|r| r.difference), spread_of(&|r| r.product), spread_of(&|r| r.vanishing)];
    Ok(KatoPonceReport { alpha, samples, rows, stable: spread.iter().all(|&s| s < 2.0), spread })
}

/// Discrete Gronwall majorant check.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct GronwallCheck {
    /// `C(1 + I(t_i))` at every sample.
    pub bound: Vec<f64>,
    /// Largest `Y − bound` (negative when the inequality holds with room).
    pub worst_excess: f64,
    pub holds: bool,
}

/// Checks `Y(t) ≤ C(1 + ∫_τ^t e^{−δ'(t−s) + ∫_s^t l} l(s) ds)` on samples.
///
/// The integral is advanced by `I_{i+1} = e^{−δ'h+ΔΛ} I_i + h/2 (e^{−δ'h+ΔΛ} l_i + l_{i+1})`
/// with `ΔΛ` the trapezoid of `l` over the step.
pub fn gronwall_verify(times: &[f64], y: &[f64], l: &[f64], delta: f64, c: f64) -> Result<GronwallCheck> {
    if times.len() != y.len() || times.len() != l.len() || times.is_empty() {
        return Err(Error::precondition("Gronwall series must be nonempty and of equal length"));
    }
    let mut bound = Vec::with_capacity(times.len());
    let mut acc = 0.0;
    bound.push(c);
    for i in 1..times.len() {
        let h = times[i] - times[i - 1];
        let g = (-delta * h + 0.5 * h * (l[i - 1] + l[i])).exp();
        acc = g * acc + 0.5 * h * (g * l[i - 1] + l[i]);
        bound.push(c * (1.0 + acc));
    }
    let worst_excess = y.iter().zip(&bound).map(|(a, b)| a - b).fold(f64::NEG_INFINITY, f64::max);
    let holds = y.iter().zip(&bound).all(|(a, b)| *a <= b * (1.0 + 1e-9) + 1e-12);
    Ok(GronwallCheck { bound, worst_excess, holds })
}
