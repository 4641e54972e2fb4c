use serde::{Deserialize, Serialize};

use crate::measure::{GlobalMeasure, VectorMeasure};
use crate::propagator::{ForcingTrack, LinearPropagator};
use crate::spectral::{Exponent, Grid, Nonlinearity, SpectralField, StatePair};
use crate::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SolverConfig {
    pub dt: f64,
    pub max_dt: f64,
    /// Blow-up guard on `½‖ξ‖²_E`.
    pub energy_ceiling: f64,
}

impl Default for SolverConfig {
    fn default() -> Self {
        Self { dt: 0.01, max_dt: 0.1, energy_ceiling: 1e6 }
    }
}

impl SolverConfig {
    pub fn with_dt(dt: f64) -> Self {
        Self { dt, ..Self::default() }
    }

    fn validate(&self) -> Result<()> {
        if !(self.dt > 0.0) || !self.dt.is_finite() {
            return Err(Error::Config(format!("dt must be positive, got {}", self.dt)));
        }
        if self.dt > self.max_dt {
            return Err(Error::precondition(format!("dt = {} exceeds the configured maximum {}", self.dt, self.max_dt)));
        }
        Ok(())
    }
}

/// `∂²u + γ∂u + (1−Δ)u + f(u) = μ` on a fixed grid.
#[derive(Clone, Debug)]
pub struct WaveModel {
    pub propagator: LinearPropagator,
    pub nonlinearity: Nonlinearity,
}

impl WaveModel {
    pub fn new(grid: &Grid, gamma: f64, nonlinearity: Nonlinearity) -> Result<Self> {
        Ok(Self { propagator: LinearPropagator::new(grid, gamma)?, nonlinearity })
    }

    pub fn grid(&self) -> &Grid {
        self.propagator.grid()
    }

    pub fn gamma(&self) -> f64 {
        self.propagator.gamma()
    }

    /// One Strang step `L(dt/2) ∘ N(dt) ∘ L(dt/2)` from `t0` to `t1` (left limit at `t1`).
    /// Atoms at `t0` must already be applied; atoms strictly inside are rejected.
    pub fn step(&self, xi: &StatePair, t0: f64, t1: f64, track: &ForcingTrack) -> Result<StatePair> {
        if !(t1 > t0) {
            return Err(Error::domain(format!("step needs t1 > t0, got [{t0}, {t1}]")));
        }
        if let Some(t) = track.atom_times().find(|&t| t > t0 && t < t1) {
            return Err(Error::Contract(format!("atom at t = {t} inside step [{t0}, {t1}]")));
        }
        let mid = 0.5 * (t0 + t1);
        let mut half = self.propagator.duhamel_density(xi, track, t0, mid)?;
        if !self.nonlinearity.is_zero() {
            let f = self.nonlinearity.apply(&half.u);
            half.v.axpy(-(t1 - t0), &f);
        }
        self.propagator.duhamel_density(&half, track, mid, t1)
    }

    /// Integrates over `[τ, T]` with the forcing window of `μ`.
    pub fn simulate(&self, xi: &StatePair, tau: f64, t_end: f64, mu: &GlobalMeasure, cfg: &SolverConfig) -> Result<Trajectory> {
        if !(t_end > tau) {
            return Err(Error::precondition(format!("simulation needs T > τ, got [{tau}, {t_end}]")));
        }
        let window = mu.window(tau, t_end)?;
        self.simulate_measure(xi, &window, cfg)
    }

    /// Integrates over the interval of a finite measure.
    pub fn simulate_measure(&self, xi: &StatePair, mu: &VectorMeasure, cfg: &SolverConfig) -> Result<Trajectory> {
        let track = ForcingTrack::new(self.grid(), mu)?;
        self.simulate_track(xi, &track, cfg)
    }

    pub fn simulate_track(&self, xi: &StatePair, track: &ForcingTrack, cfg: &SolverConfig) -> Result<Trajectory> {
        cfg.validate()?;
        let (tau, t_end) = track.interval();
        if !(t_end > tau) {
            return Err(Error::precondition(format!("simulation needs T > τ, got [{tau}, {t_end}]")));
        }
        let atoms: Vec<f64> = track.atom_times().collect();
        let times = schedule(tau, t_end, cfg.dt, &atoms);
        self.run_schedule(xi, track, &times, cfg)
    }

    /// Steps through an explicit schedule, which must contain every atom time of `track`
    /// that lies inside it.
    pub fn run_schedule(&self, xi: &StatePair, track: &ForcingTrack, times: &[f64], cfg: &SolverConfig) -> Result<Trajectory> {
        if **xi.grid() != **self.grid() {
            return Err(Error::GridMismatch(format!("state on {:?}, model on {:?}", xi.grid(), self.grid())));
        }
        if times.is_empty() || times.windows(2).any(|w| !(w[1] > w[0])) {
            return Err(Error::precondition("schedule must be nonempty and strictly increasing"));
        }
        let mut traj = Trajectory::new(self, cfg.dt);
        let mut cur = xi.clone();
        for (i, &t) in times.iter().enumerate() {
            if i > 0 {
                let post = traj.post_state(i - 1);
                cur = self.step(&post, times[i - 1], t, track)?;
                let energy = 0.5 * cur.energy_norm_sq(0.0);
                if !energy.is_finite() || energy > cfg.energy_ceiling {
                    return Err(Error::BlowUp {
                        time: t,
                        energy,
                        ceiling: cfg.energy_ceiling,
                        last_time: times[i - 1],
                        last_state: Box::new(post),
                    });
                }
            }
            traj.push(t, cur.clone(), track.atom_at(t).cloned());
        }
        Ok(traj)
    }
}

/// Uniform grid from `τ` with spacing `dt`, ending exactly at `T`, with every atom
/// time inserted (points closer than `1e−12·max(1, |t|)` merge onto the atom).
pub fn schedule(tau: f64, t_end: f64, dt: f64, atoms: &[f64]) -> Vec<f64> {
    let n = ((t_end - tau) / dt - 1e-9).ceil().max(1.0) as usize;
    let mut pts: Vec<(f64, bool)> = (0..n).map(|i| (tau + i as f64 * dt, false)).collect();
    pts.push((t_end, false));
    pts.extend(atoms.iter().filter(|&&t| t >= tau && t <= t_end).map(|&t| (t, true)));
    pts.sort_by(|a, b| a.0.total_cmp(&b.0).then(b.1.cmp(&a.1)));
    let mut out: Vec<(f64, bool)> = Vec::with_capacity(pts.len());
    for p in pts {
        match out.last_mut() {
            Some(last) if (p.0 - last.0).abs() <= 1e-12 * p.0.abs().max(1.0) => {
                if p.1 && !last.1 {
                    *last = p;
                }
            }
            _ => out.push(p),
        }
    }
    // keep the endpoints exact
    if let Some(first) = out.first_mut() {
        if !first.1 {
            first.0 = tau;
        }
    }
    if let Some(last) = out.last_mut() {
        if !last.1 {
            last.0 = t_end;
        }
    }
    out.into_iter().map(|p| p.0).collect()
}

/// Sampled solution: left limits at every schedule time plus the kicks applied there.
#[derive(Clone, Debug)]
pub struct Trajectory {
    pub grid: Grid,
    pub gamma: f64,
    pub nonlinearity: Nonlinearity,
    pub dt: f64,
    pub times: Vec<f64>,
    pub states: Vec<StatePair>,
    pub kicks: Vec<Option<SpectralField>>,
    pub energy_norms: Vec<f64>,
    pub l12: Vec<f64>,
}

impl Trajectory {
    fn new(model: &WaveModel, dt: f64) -> Self {
        Self {
            grid: model.grid().clone(),
            gamma: model.gamma(),
            nonlinearity: model.nonlinearity,
            dt,
            times: Vec::new(),
            states: Vec::new(),
            kicks: Vec::new(),
            energy_norms: Vec::new(),
            l12: Vec::new(),
        }
    }

    fn push(&mut self, t: f64, state: StatePair, kick: Option<SpectralField>) {
        self.energy_norms.push(state.energy_norm());
        self.l12.push(state.u.norm_lp(Exponent::P(12.0)));
        self.times.push(t);
        self.states.push(state);
        self.kicks.push(kick);
    }

    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    /// State just after sample `i`: the left limit plus `(0, h)` when an atom sits there.
    pub fn post_state(&self, i: usize) -> StatePair {
        let mut s = self.states[i].clone();
        if let Some(h) = &self.kicks[i] {
            s.v.axpy(1.0, h);
        }
        s
    }

    /// Left limit at the final time.
    pub fn final_state(&self) -> &StatePair {
        self.states.last().expect("nonempty trajectory")
    }

    /// Indices of samples carrying an atom.
    pub fn atom_indices(&self) -> Vec<usize> {
        (0..self.len()).filter(|&i| self.kicks[i].is_some()).collect()
    }

    fn l12_at(&self, t: f64) -> f64 {
        let i = self.times.partition_point(|&x| x <= t);
        if i == 0 {
            return self.l12[0];
        }
        if i == self.len() {
            return self.l12[self.len() - 1];
        }
        let (t0, t1) = (self.times[i - 1], self.times[i]);
        let th = (t - t0) / (t1 - t0);
        (1.0 - th) * self.l12[i - 1] + th * self.l12[i]
    }

    /// `(∫_a^b ‖u‖⁴_{L¹²} ds)^{1/4}` by the trapezoid rule on the samples.
    pub fn strichartz_norm(&self, a: f64, b: f64) -> f64 {
        let mut pts = vec![(a, self.l12_at(a))];
        for (i, &t) in self.times.iter().enumerate() {
            if t > a && t < b {
                pts.push((t, self.l12[i]));
            }
        }
        pts.push((b, self.l12_at(b)));
        let s: f64 = pts.windows(2).map(|w| 0.5 * (w[1].0 - w[0].0) * (w[0].1.powi(4) + w[1].1.powi(4))).sum();
        s.max(0.0).powf(0.25)
    }

    /// Unit-window Strichartz norms starting every `step` from `from` while the window fits.
    pub fn window_series(&self, from: f64, step: f64) -> Vec<(f64, f64)> {
        let end = *self.times.last().expect("nonempty trajectory");
        let mut out = Vec::new();
        let mut k = 0usize;
        loop {
            let t = from + k as f64 * step;
            if t + 1.0 > end + 1e-12 {
                break;
            }
            out.push((t, self.strichartz_norm(t, (t + 1.0).min(end))));
            k += 1;
        }
        out
    }

    /// CSV: `t, energy_norm, l12`.
    pub fn to_csv(&self) -> String {
        let mut s = String::from("t,energy_norm,l12\n");
        for i in 0..self.len() {
            s.push_str(&format!("{:e},{:e},{:e}\n", self.times[i], self.energy_norms[i], self.l12[i]));
        }
        s
    }
}
