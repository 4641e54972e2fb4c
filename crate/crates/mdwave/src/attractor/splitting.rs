use serde::Serialize;

use crate::dynamics::{SolverConfig, WaveModel};
use crate::measure::VectorMeasure;
use crate::propagator::{fit_decay, ForcingTrack, LinearPropagator};
use crate::spectral::{Nonlinearity, StatePair};
use crate::{Error, Result};

/// Sample range for the coercivity check of `F_L`.
pub const COERCIVITY_RANGE: f64 = 20.0;

/// `F_L ≥ 0` and `f_L(u)u − F_L(u) ≥ 0` on `|u| ≤ 20`, with `f_L = f + L·u`.
pub fn coercive(f: &Nonlinearity, l: f64) -> bool {
    let fl = f.with_linear(f.linear + l);
    (0..=4000).all(|i| {
        let u = -COERCIVITY_RANGE + 2.0 * COERCIVITY_RANGE * i as f64 / 4000.0;
        let big_f = fl.antiderivative(u);
        big_f >= -1e-12 && fl.f(u) * u - big_f >= -1e-12
    })
}

/// Smallest `L` in `{0, 1, 2, 4, 8, …}` making `f_L` coercive.
pub fn coercivity_threshold(f: &Nonlinearity) -> Result<f64> {
    if coercive(f, 0.0) {
        return Ok(0.0);
    }
    let mut l = 1.0;
    while l <= 1e6 {
        if coercive(f, l) {
            return Ok(l);
        }
        l *= 2.0;
    }
    Err(Error::Config("no coercive shift L found up to 1e6".into()))
}

#[derive(Clone, Debug)]
pub struct SplittingConfig {
    pub l: f64,
    pub alpha: f64,
    pub solver: SolverConfig,
    /// Decay fit window start for `‖ξ_v‖_E`.
    pub decay_from: f64,
    /// Split point of the growth check for `ξ_w`.
    pub early_window: f64,
}

/// Joint samples of the reference solution and the three parts.
#[derive(Clone, Debug)]
pub struct SplitTrajectory {
    pub times: Vec<f64>,
    pub u: Vec<StatePair>,
    pub theta: Vec<StatePair>,
    pub v: Vec<StatePair>,
    pub w: Vec<StatePair>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SplittingReport {
    pub l: f64,
    pub alpha: f64,
    pub reconstruction: f64,
    pub solver_tolerance: f64,
    pub v_decay_rate: f64,
    pub w_early_sup: f64,
    pub w_late_sup: f64,
    pub theta_sup: f64,
    pub reconstruction_ok: bool,
    pub v_decays: bool,
    pub w_bounded: bool,
}

/// Co-evolves `u`, `θ`, `v`, `w` with identical Strang steps.
pub fn split_evolve(
    model: &WaveModel,
    xi: &StatePair,
    mu: &VectorMeasure,
    l: f64,
    cfg: &SolverConfig,
) -> Result<SplitTrajectory> {
    let g = model.grid();
    let track = ForcingTrack::new(g, mu)?;
    let quiet = ForcingTrack::zero(mu.interval().0, mu.interval().1);
    let (a, b) = mu.interval();
    let atoms: Vec<f64> = track.atom_times().collect();
    let times = crate::dynamics::schedule(a, b, cfg.dt, &atoms);
    let prop: &LinearPropagator = &model.propagator;
    let f = model.nonlinearity;
    let f_l = f.with_linear(f.linear + l);
    let zero = StatePair::zeros(g);
    let mut out = SplitTrajectory { times: Vec::new(), u: Vec::new(), theta: Vec::new(), v: Vec::new(), w: Vec::new() };
    let (mut u, mut th, mut v, mut w) = (xi.clone(), zero.clone(), xi.clone(), zero);
    for (i, &t) in times.iter().enumerate() {
        if i > 0 {
            let t0 = times[i - 1];
            let mid = 0.5 * (t0 + t);
            let dt = t - t0;
            let mut uh = prop.duhamel_density(&u, &track, t0, mid)?;
            let thh = prop.duhamel_density(&th, &track, t0, mid)?;
            let mut vh = prop.duhamel_density(&v, &quiet, t0, mid)?;
            let mut wh = prop.duhamel_density(&w, &quiet, t0, mid)?;
            let fu = f.apply(&uh.u);
            let fv = f.apply(&vh.u);
            let flv = f_l.apply(&vh.u);
            let sum = thh.u.add(&vh.u).add(&wh.u);
            // f(θ+v+w) − f(v) − Lv
            let mut fw = f.apply(&sum);
            fw.axpy(-1.0, &fv);
            fw.axpy(-l, &vh.u);
            uh.v.axpy(-dt, &fu);
            vh.v.axpy(-dt, &flv);
            wh.v.axpy(-dt, &fw);
            u = prop.duhamel_density(&uh, &track, mid, t)?;
            th = prop.duhamel_density(&thh, &track, mid, t)?;
            v = prop.duhamel_density(&vh, &quiet, mid, t)?;
            w = prop.duhamel_density(&wh, &quiet, mid, t)?;
        }
        out.times.push(t);
        out.u.push(u.clone());
        out.theta.push(th.clone());
        out.v.push(v.clone());
        out.w.push(w.clone());
        if let Some(h) = track.atom_at(t) {
            u.v.axpy(1.0, h);
            th.v.axpy(1.0, h);
        }
    }
    Ok(out)
}

/// Runs the three-part splitting and its checks. The solver tolerance is the
/// Richardson estimate `max_t ‖u_dt − u_{dt/2}‖_E` on the common samples.
pub fn splitting_run(model: &WaveModel, xi: &StatePair, mu: &VectorMeasure, cfg: &SplittingConfig) -> Result<SplittingReport> {
    if !(cfg.alpha > 0.0 && cfg.alpha < 0.4) {
        return Err(Error::precondition(format!("α = {} outside (0, 2/5)", cfg.alpha)));
    }
    if !coercive(&model.nonlinearity, cfg.l) {
        return Err(Error::Config(format!(
            "L = {} below the coercivity threshold {}",
            cfg.l,
            coercivity_threshold(&model.nonlinearity)?
        )));
    }
    let run = split_evolve(model, xi, mu, cfg.l, &cfg.solver)?;
    let half = SolverConfig { dt: 0.5 * cfg.solver.dt, ..cfg.solver };
    let fine = model.simulate_measure(xi, mu, &half)?;
    let mut tol: f64 = 0.0;
    let mut j = 0;
    for (i, &t) in run.times.iter().enumerate() {
        while j < fine.len() && fine.times[j] < t - 1e-12 {
            j += 1;
        }
        if j < fine.len() && (fine.times[j] - t).abs() <= 1e-12 {
            tol = tol.max(run.u[i].sub(&fine.states[j]).energy_norm());
        }
    }
    let reconstruction = run
        .u
        .iter()
        .zip(&run.theta)
        .zip(&run.v)
        .zip(&run.w)
        .map(|(((u, th), v), w)| u.sub(&th.add(v).add(w)).energy_norm())
        .fold(0.0, f64::max);
    let end = *run.times.last().expect("samples");
    let v_norms: Vec<f64> = run.v.iter().map(StatePair::energy_norm).collect();
    let v_decay_rate = fit_decay(&run.times, &v_norms, cfg.decay_from, end).unwrap_or(0.0);
    let tau = run.times[0];
    let w_alpha: Vec<f64> = run.w.iter().map(|s| s.energy_norm_alpha(cfg.alpha)).collect();
    let sup_over = |lo: f64, hi: f64| {
        run.times.iter().zip(&w_alpha).filter(|(t, _)| **t >= lo && **t <= hi).map(|(_, x)| *x).fold(0.0, f64::max)
    };
    let w_early_sup = sup_over(tau, tau + cfg.early_window);
    let w_late_sup = sup_over(tau + cfg.early_window, end);
    let theta_sup = run.theta.iter().map(|s| s.energy_norm_alpha(cfg.alpha)).fold(0.0, f64::max);
    Ok(SplittingReport {
        l: cfg.l,
        alpha: cfg.alpha,
        reconstruction,
        solver_tolerance: tol,
        v_decay_rate,
        w_early_sup,
        w_late_sup,
        theta_sup,
        reconstruction_ok: reconstruction <= 10.0 * tol,
        v_decays: v_decay_rate >= 0.05,
        w_bounded: w_late_sup <= 1.2 * w_early_sup,
    })
}
