use crate::dynamics::{SolverConfig, WaveModel};
use crate::measure::{GlobalMeasure, VectorMeasure};
use crate::spectral::StatePair;
use crate::{Error, Result};

/// Finitely many shifts `T(s_i)μ` of a forcing.
#[derive(Clone, Debug)]
pub struct HullSample {
    pub base: GlobalMeasure,
    pub shifts: Vec<f64>,
}

impl HullSample {
    pub fn new(base: GlobalMeasure, shifts: Vec<f64>) -> Self {
        Self { base, shifts }
    }

    /// `count` shifts evenly spread over `[0, span)`.
    pub fn uniform(base: GlobalMeasure, span: f64, count: usize) -> Self {
        let shifts = (0..count).map(|i| span * i as f64 / count as f64).collect();
        Self { base, shifts }
    }

    pub fn members(&self) -> Vec<GlobalMeasure> {
        self.shifts.iter().map(|&s| self.base.shift(s)).collect()
    }

    /// Window measures of every member on `[a, b]`.
    pub fn windows(&self, a: f64, b: f64) -> Result<Vec<VectorMeasure>> {
        self.members().iter().map(|m| m.window(a, b)).collect()
    }

    /// Checks `sup_t TV(z|[t,t+1]) ≤ ‖μ‖_{M_b}` for each member on unit windows starting
    /// at `starts`, with `‖μ‖_{M_b}` estimated from the base over the shifted starts.
    /// Returns `(base estimate, worst member value)`.
    pub fn unit_tv_bound(&self, starts: &[f64]) -> Result<(f64, f64)> {
        let all: Vec<f64> =
            self.shifts.iter().flat_map(|&s| starts.iter().map(move |&t| t + s)).collect();
        let base = self.base.unit_window_tv(&all)?;
        let mut worst: f64 = 0.0;
        for m in self.members() {
            worst = worst.max(m.unit_window_tv(starts)?);
        }
        Ok((base, worst))
    }
}

/// `‖U_{T(s)μ}(t, τ)ξ − U_μ(t+s, τ+s)ξ‖_E`.
pub fn translation_identity_check(
    model: &WaveModel,
    mu: &GlobalMeasure,
    s: f64,
    t: f64,
    tau: f64,
    xi: &StatePair,
    cfg: &SolverConfig,
) -> Result<f64> {
    if !(t > tau) {
        return Err(Error::precondition(format!("translation check needs t > τ, got τ = {tau}, t = {t}")));
    }
    let shifted = model.simulate(xi, tau, t, &mu.shift(s), cfg)?;
    let direct = model.simulate(xi, tau + s, t + s, mu, cfg)?;
    Ok(shifted.final_state().sub(direct.final_state()).energy_norm())
}
