//! Scalar first-order model `y' = y − y³ + c + ρ(t) + Σ h_i δ_{t_i}` with kicks on `y`.

use serde::Serialize;

use crate::measure::{AsymptoticProfile, GlobalMeasure, HilbertVector, SpikeTrain};
use crate::{Error, Result};

/// Right-hand side `y − y³ + base` plus the density of `forcing`; atoms of `forcing` kick `y`.
#[derive(Clone, Debug, PartialEq)]
pub struct ScalarModel {
    pub base: f64,
    pub forcing: GlobalMeasure,
}

impl ScalarModel {
    /// `y' = y − y³ − 3 + 3·(2/π)arctan t`.
    pub fn arctan() -> Self {
        Self::arctan_with(None)
    }

    /// The arctan model plus `±½` kicks at `Kn` and `Kn + 1/(Kn)`.
    pub fn arctan_kicked(k: f64) -> Self {
        Self::arctan_with(Some(SpikeTrain::kicks(k)))
    }

    fn arctan_with(spikes: Option<SpikeTrain>) -> Self {
        let profile =
            AsymptoticProfile { amplitude: 3.0, direction: HilbertVector::scalar(1.0), node_spacing: 0.25, spikes };
        Self { base: -3.0, forcing: GlobalMeasure::asymptotic_profile(profile).expect("valid profile") }
    }

    /// Frozen hull endpoint: `y' = y − y³ − 3 + c`.
    pub fn constant(c: f64) -> Self {
        Self { base: -3.0, forcing: GlobalMeasure::constant(HilbertVector::scalar(c)) }
    }

    /// `y' = y − y³`.
    pub fn cubic() -> Self {
        Self { base: 0.0, forcing: GlobalMeasure::zero(1) }
    }

    pub fn shift(&self, s: f64) -> Self {
        Self { base: self.base, forcing: self.forcing.shift(s) }
    }

    fn rhs(&self, t: f64, y: f64) -> f64 {
        let rho = self.forcing.density_value(t).map(|v| v.coeffs()[0]).unwrap_or(0.0);
        y - y * y * y + self.base + rho
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct OdeOptions {
    pub rtol: f64,
    pub atol: f64,
    pub max_step: f64,
}

impl Default for OdeOptions {
    fn default() -> Self {
        Self { rtol: 1e-9, atol: 1e-11, max_step: 0.5 }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Kick {
    pub t: f64,
    pub before: f64,
    pub after: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ScalarTrajectory {
    pub times: Vec<f64>,
    pub values: Vec<f64>,
    pub kicks: Vec<Kick>,
}

impl ScalarTrajectory {
    pub fn last(&self) -> f64 {
        *self.values.last().expect("nonempty")
    }

    /// `(min, max)` over samples and post-kick values with `t ≥ from`.
    pub fn range_after(&self, from: f64) -> (f64, f64) {
        let mut lo = f64::INFINITY;
        let mut hi = f64::NEG_INFINITY;
        for (t, y) in self.times.iter().zip(&self.values) {
            if *t >= from {
                lo = lo.min(*y);
                hi = hi.max(*y);
            }
        }
        for k in self.kicks.iter().filter(|k| k.t >= from) {
            lo = lo.min(k.after);
            hi = hi.max(k.after);
        }
        (lo, hi)
    }
}

// Dormand–Prince 5(4) tableau
const C: [f64; 7] = [0.0, 0.2, 0.3, 0.8, 8.0 / 9.0, 1.0, 1.0];
const A: [[f64; 6]; 7] = [
    [0.0; 6],
    [0.2, 0.0, 0.0, 0.0, 0.0, 0.0],
    [3.0 / 40.0, 9.0 / 40.0, 0.0, 0.0, 0.0, 0.0],
    [44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0, 0.0, 0.0, 0.0],
    [19372.0 / 6561.0, -25360.0 / 2187.0, 64448.0 / 6561.0, -212.0 / 729.0, 0.0, 0.0],
    [9017.0 / 3168.0, -355.0 / 33.0, 46732.0 / 5247.0, 49.0 / 176.0, -5103.0 / 18656.0, 0.0],
    [35.0 / 384.0, 0.0, 500.0 / 1113.0, 125.0 / 192.0, -2187.0 / 6784.0, 11.0 / 84.0],
];
const E: [f64; 7] = [
    71.0 / 57600.0,
    0.0,
    -71.0 / 16695.0,
    71.0 / 1920.0,
    -17253.0 / 339200.0,
    22.0 / 525.0,
    -1.0 / 40.0,
];

/// Adaptive Dormand–Prince integration of a scalar ODE; returns the accepted points.
pub fn dopri5(f: &dyn Fn(f64, f64) -> f64, t0: f64, y0: f64, t1: f64, opts: &OdeOptions) -> Result<Vec<(f64, f64)>> {
    let mut out = vec![(t0, y0)];
    if t1 <= t0 {
        return Ok(out);
    }
    let (mut t, mut y) = (t0, y0);
    let mut h = (0.01 * (t1 - t0)).min(opts.max_step);
    let mut k1 = f(t, y);
    let mut rejects = 0usize;
    while t < t1 {
        if t + h > t1 {
            h = t1 - t;
        }
        let mut k = [0.0; 7];
        k[0] = k1;
        for s in 1..7 {
            let yi = y + h * (0..s).map(|j| A[s][j] * k[j]).sum::<f64>();
            k[s] = f(t + C[s] * h, yi);
        }
        let y_new = y + h * (0..6).map(|j| A[6][j] * k[j]).sum::<f64>();
        let err = h * (0..7).map(|j| E[j] * k[j]).sum::<f64>();
        let scale = opts.atol + opts.rtol * y.abs().max(y_new.abs());
        let ratio = (err / scale).abs();
        if ratio <= 1.0 || h <= 1e-14 * t.abs().max(1.0) {
            t = if t + h >= t1 { t1 } else { t + h };
            y = y_new;
            if !y.is_finite() {
                return Err(Error::domain(format!("scalar solution diverged at t = {t}")));
            }
            k1 = k[6];
            out.push((t, y));
            rejects = 0;
        } else {
            rejects += 1;
            if rejects > 60 {
                return Err(Error::domain(format!("step size underflow at t = {t}")));
            }
        }
        let fac = if ratio == 0.0 { 5.0 } else { (0.9 * ratio.powf(-0.2)).clamp(0.2, 5.0) };
        h = (h * fac).min(opts.max_step);
    }
    Ok(out)
}

/// Integrates `model` on `[τ, T]`, splitting at atoms; an atom at `τ` kicks the initial value.
pub fn ode_simulate(model: &ScalarModel, y0: f64, tau: f64, t_end: f64, opts: &OdeOptions) -> Result<ScalarTrajectory> {
    if !(t_end > tau) {
        return Err(Error::precondition(format!("ode run needs T > τ, got [{tau}, {t_end}]")));
    }
    if model.forcing.dim() != 1 {
        return Err(Error::precondition("scalar model needs a one-dimensional forcing"));
    }
    let atoms: Vec<(f64, f64)> =
        model.forcing.window(tau, t_end)?.atoms().iter().map(|a| (a.time, a.value.coeffs()[0])).collect();
    let rhs = |t: f64, y: f64| model.rhs(t, y);
    let mut traj = ScalarTrajectory { times: vec![tau], values: vec![y0], kicks: Vec::new() };
    let mut y = y0;
    let mut t = tau;
    for (ta, h) in atoms {
        if ta > t {
            let seg = dopri5(&rhs, t, y, ta, opts)?;
            for &(s, v) in &seg[1..] {
                traj.times.push(s);
                traj.values.push(v);
            }
            y = seg.last().expect("nonempty").1;
            t = ta;
        }
        if ta < t_end {
            traj.kicks.push(Kick { t: ta, before: y, after: y + h });
            y += h;
        }
    }
    if t < t_end {
        let seg = dopri5(&rhs, t, y, t_end, opts)?;
        for &(s, v) in &seg[1..] {
            traj.times.push(s);
            traj.values.push(v);
        }
    }
    Ok(traj)
}
