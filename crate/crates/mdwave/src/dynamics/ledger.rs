use serde::Serialize;

use super::solver::Trajectory;
use crate::propagator::ForcingTrack;
use crate::spectral::{SpectralField, StatePair};
use crate::{Error, Result};

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct IntervalRecord {
    pub t0: f64,
    pub t1: f64,
    pub delta_energy: f64,
    pub dissipation: f64,
    pub density_work: f64,
    pub residual: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct AtomRecord {
    pub t: f64,
    /// `(½(v⁺ + v⁻), h)`.
    pub work: f64,
    /// `½‖v⁻ + h‖² − ½‖v⁻‖²` from the stored states.
    pub jump_energy: f64,
}

/// Energy balance `ΔE = −γ∫‖v‖² + ∫(v, ρ) + Σ(½(v⁺+v⁻), h)` per sample interval.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct EnergyLedger {
    pub intervals: Vec<IntervalRecord>,
    pub atoms: Vec<AtomRecord>,
    /// `max_t |Σ_{intervals ≤ t} residual|`.
    pub max_cumulative_residual: f64,
}

fn energy(traj: &Trajectory, xi: &StatePair) -> f64 {
    traj.nonlinearity.nonlinear_energy(xi)
}

/// `∫_{t0}^{t1} (v(s), ρ(s)) ds` with `v` linear between the endpoint values, split at
/// density breakpoints and integrated exactly (two-point Gauss on each piece).
fn density_work(track: &ForcingTrack, v0: &SpectralField, v1: &SpectralField, t0: f64, t1: f64) -> f64 {
    let g = 0.5 / 3f64.sqrt();
    let mut acc = 0.0;
    for (p0, p1, q0, q1) in track.pieces_in(t0, t1) {
        let len = p1 - p0;
        for x in [0.5 - g, 0.5 + g] {
            let r = p0 + x * len;
            let th = (r - t0) / (t1 - t0);
            let mut v = v0.scale(1.0 - th);
            v.axpy(th, v1);
            let mut rho = q0.scale(1.0 - x);
            rho.axpy(x, &q1);
            acc += 0.5 * len * v.inner(&rho);
        }
    }
    acc
}

pub fn ledger(traj: &Trajectory, track: &ForcingTrack) -> Result<EnergyLedger> {
    if traj.is_empty() {
        return Err(Error::precondition("ledger of an empty trajectory"));
    }
    let gamma = traj.gamma;
    let mut intervals = Vec::with_capacity(traj.len());
    let mut atoms = Vec::new();
    let mut cumulative = 0.0f64;
    let mut worst = 0.0f64;
    for i in 0..traj.len() {
        let pre = &traj.states[i];
        if let Some(h) = &traj.kicks[i] {
            let post = traj.post_state(i);
            let mut mid = pre.v.add(&post.v);
            mid = mid.scale(0.5);
            atoms.push(AtomRecord {
                t: traj.times[i],
                work: mid.inner(h),
                jump_energy: 0.5 * post.v.inner(&post.v) - 0.5 * pre.v.inner(&pre.v),
            });
        }
        if i + 1 == traj.len() {
            break;
        }
        let start = traj.post_state(i);
        let end = &traj.states[i + 1];
        let (t0, t1) = (traj.times[i], traj.times[i + 1]);
        let de = energy(traj, end) - energy(traj, &start);
        let diss = -gamma * 0.5 * (t1 - t0) * (start.v.inner(&start.v) + end.v.inner(&end.v));
        let work = density_work(track, &start.v, &end.v, t0, t1);
        let residual = de - diss - work;
        cumulative += residual;
        worst = worst.max(cumulative.abs());
        intervals.push(IntervalRecord { t0, t1, delta_energy: de, dissipation: diss, density_work: work, residual });
    }
    Ok(EnergyLedger { intervals, atoms, max_cumulative_residual: worst })
}

impl EnergyLedger {
    /// CSV: `t0, t1, delta_energy, dissipation, density_work, residual`.
    pub fn to_csv(&self) -> String {
        let mut s = String::from("t0,t1,delta_energy,dissipation,density_work,residual\n");
        for r in &self.intervals {
            s.push_str(&format!(
                "{:e},{:e},{:e},{:e},{:e},{:e}\n",
                r.t0, r.t1, r.delta_energy, r.dissipation, r.density_work, r.residual
            ));
        }
        s
    }

    /// `max |work − jump_energy|` over the atoms.
    pub fn atom_mismatch(&self) -> f64 {
        self.atoms.iter().map(|a| (a.work - a.jump_energy).abs()).fold(0.0, f64::max)
    }
}

/// `min(γ/4, 1/(4+γ))`.
pub fn default_delta(gamma: f64) -> f64 {
    (0.25 * gamma).min(1.0 / (4.0 + gamma))
}

/// `½‖ξ‖²_E + (δγ/2)‖u‖² + δ(v, u) + (F(u), 1)`.
pub fn perturbed_energy(traj: &Trajectory, xi: &StatePair, delta: f64) -> f64 {
    energy(traj, xi) + 0.5 * delta * traj.gamma * xi.u.inner(&xi.u) + delta * xi.v.inner(&xi.u)
}

/// `(γ − 3δ/2)‖v‖² − δ²(v, u) + (δ/2 − γδ²/2)‖u‖² + (δ/2)‖∇u‖²`.
pub fn b_form(xi: &StatePair, gamma: f64, delta: f64) -> f64 {
    let grad = xi.u.norm_grad();
    (gamma - 1.5 * delta) * xi.v.inner(&xi.v) - delta * delta * xi.v.inner(&xi.u)
        + (0.5 * delta - 0.5 * gamma * delta * delta) * xi.u.inner(&xi.u)
        + 0.5 * delta * grad * grad
}

/// Smallest eigenvalue over `|k|²` of the per-mode coefficient matrix of `B`.
pub fn b_min_eigenvalue(gamma: f64, delta: f64, k2_values: &[f64]) -> f64 {
    k2_values
        .iter()
        .map(|&k2| {
            let a = 0.5 * delta - 0.5 * gamma * delta * delta + 0.5 * delta * k2;
            let c = gamma - 1.5 * delta;
            let b = -0.5 * delta * delta;
            0.5 * (a + c) - (0.25 * (a - c) * (a - c) + b * b).sqrt()
        })
        .fold(f64::INFINITY, f64::min)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PerturbedReport {
    pub delta: f64,
    pub functional: Vec<f64>,
    pub b_values: Vec<f64>,
    pub b_min_eigenvalue: f64,
    pub b_positive: bool,
}

/// Perturbed functional and `B` on every sample, with the positivity check of `B`.
pub fn perturbed_report(traj: &Trajectory, delta: f64) -> PerturbedReport {
    let k2: Vec<f64> = {
        let mut v: Vec<i64> = (0..traj.grid.slots())
            .filter(|&s| traj.grid.is_active(s))
            .map(|s| traj.grid.wave(s).iter().map(|c| c * c).sum())
            .collect();
        v.sort_unstable();
        v.dedup();
        v.into_iter().map(|x| x as f64).collect()
    };
    let functional = traj.states.iter().map(|s| perturbed_energy(traj, s, delta)).collect();
    let b_values: Vec<f64> = traj.states.iter().map(|s| b_form(s, traj.gamma, delta)).collect();
    let min_eig = b_min_eigenvalue(traj.gamma, delta, &k2);
    let b_positive = min_eig > 0.0 && b_values.iter().all(|&b| b >= 0.0);
    PerturbedReport { delta, functional, b_values, b_min_eigenvalue: min_eig, b_positive }
}
