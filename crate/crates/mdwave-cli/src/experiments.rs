//! One runner per experiment tag.

use std::f64::consts::PI;

use rand::Rng;

use mdwave::attractor::{
    coercivity_threshold, energy_to_strichartz_scan, gronwall_verify, kato_ponce_check, kernel_vs_attractor, pullback_attractor,
    splitting_run, strichartz_cascade, translation_identity_check, weak_star_distance, HullSample, KernelConfig, SplittingConfig,
    TestFamily,
};
use mdwave::dynamics::{
    default_delta, dissipativity_scan, ledger, ode_simulate, perturbed_report, OdeOptions, ScalarModel, SolverConfig, WaveModel,
};
use mdwave::measure::{delta_approximation, mollify, project_tail, HilbertVector, VectorMeasure};
use mdwave::numerics::adaptive_simpson;
use mdwave::propagator::{block_mul, delta_star, energy_operator_norm, fit_decay, mode_block, ForcingTrack, LinearPropagator};
use mdwave::sampling::member_rng;
use mdwave::spectral::{Grid, SpectralField, StatePair};

use crate::report::{csv, Summary};
use crate::scenario::{Experiment, Scenario, ScenarioError};

/// Failure of an experiment before its checks could be evaluated.
#[derive(Debug)]
pub enum RunError {
    Scenario(ScenarioError),
    Solver(mdwave::Error),
}

impl From<mdwave::Error> for RunError {
    fn from(e: mdwave::Error) -> Self {
        RunError::Solver(e)
    }
}

type Outcome = Result<Summary, RunError>;

/// Check names each experiment understands; the first group runs when none are listed.
fn known_checks(e: Experiment) -> (&'static [&'static str], &'static [&'static str]) {
    match e {
        Experiment::Simulate => (
            &["jump", "atom-energy"],
            &["jump", "atom-energy", "ledger-order", "energy-decay", "dissipativity", "b-form", "strichartz-envelope"],
        ),
        Experiment::LinearCheck => (&["mode-block", "duhamel-oracle", "decay"], &["mode-block", "duhamel-oracle", "decay"]),
        Experiment::MeasureApprox => (
            &["delta-rate", "tail-variation", "weak-star"],
            &["delta-rate", "tail-variation", "weak-star"],
        ),
        Experiment::Attractor => (&["translation", "hull-tv"], &["translation", "hull-tv", "pullback"]),
        Experiment::KernelVsAttractor => (&["perturbed", "unperturbed"], &["perturbed", "unperturbed"]),
        Experiment::Splitting => (&["reconstruction", "v-decay", "w-bounded"], &["reconstruction", "v-decay", "w-bounded"]),
        Experiment::Cascade => (
            &["energy-constant", "strichartz-constant", "structure"],
            &["energy-constant", "strichartz-constant", "structure"],
        ),
        Experiment::Inequality => (&["kato-ponce", "gronwall"], &["kato-ponce", "product-bounds", "gronwall"]),
        Experiment::OdeDemo => (
            &["plus-three", "minus-three", "arctan", "intervals"],
            &["plus-three", "minus-three", "arctan", "intervals"],
        ),
    }
}

/// Requested checks, or the experiment defaults; unknown names are a parse error.
pub fn selected_checks(s: &Scenario) -> Result<Vec<String>, ScenarioError> {
    let (defaults, all) = known_checks(s.experiment);
    if let Some(bad) = s.checks.iter().find(|c| !all.contains(&c.as_str())) {
        return Err(ScenarioError::Parse(format!(
            "unknown check `{bad}` for experiment {}; expected one of {}",
            s.experiment.tag(),
            all.join(", ")
        )));
    }
    Ok(if s.checks.is_empty() { defaults.iter().map(|c| c.to_string()).collect() } else { s.checks.clone() })
}

pub fn run_experiment(s: &Scenario) -> Outcome {
    let checks = selected_checks(s).map_err(RunError::Scenario)?;
    let want = |c: &str| checks.iter().any(|x| x == c);
    match s.experiment {
        Experiment::Simulate => simulate(s, &want),
        Experiment::LinearCheck => linear_check(s, &want),
        Experiment::MeasureApprox => measure_approx(s, &want),
        Experiment::Attractor => attractor(s, &want),
        Experiment::KernelVsAttractor => kernel(s, &want),
        Experiment::Splitting => splitting(s),
        Experiment::Cascade => cascade(s),
        Experiment::Inequality => inequality(s, &want),
        Experiment::OdeDemo => ode_demo(s, &want),
    }
}

fn model(s: &Scenario, grid: &Grid) -> mdwave::Result<WaveModel> {
    WaveModel::new(grid, s.model.gamma, s.model.nonlinearity.build())
}

fn max_spread(values: &[f64]) -> f64 {
    let hi = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let lo = values.iter().copied().fold(f64::INFINITY, f64::min);
    if lo > 0.0 { hi / lo } else { f64::INFINITY }
}

fn simulate(s: &Scenario, want: &dyn Fn(&str) -> bool) -> Outcome {
    let g = s.grid()?;
    let m = model(s, &g)?;
    let xi = s.initial_state(&g);
    let mu = s.window_forcing(&g)?;
    let track = ForcingTrack::new(&g, &mu)?;
    let cfg = s.solver();
    let traj = m.simulate_measure(&xi, &mu, &cfg)?;
    let led = ledger(&traj, &track)?;
    let mut out = Summary::default();
    out.value("final_energy_norm", traj.final_state().energy_norm());
    out.value("atoms", traj.atom_indices().len());
    out.value("max_cumulative_residual", led.max_cumulative_residual);
    out.artifact("trajectory.csv", traj.to_csv());
    out.artifact("ledger.csv", led.to_csv());

    if want("jump") {
        let mut worst: f64 = 0.0;
        for i in traj.atom_indices() {
            let h = SpectralField::from_hilbert(&g, &mu.atom_at(traj.times[i]))?;
            let jump = traj.post_state(i).v.sub(&traj.states[i].v);
            worst = worst.max(jump.sub(&h).norm_l2() / h.norm_l2());
        }
        out.value("jump_relative_error", worst);
        out.check("jump", worst <= 1e-14);
    }
    if want("atom-energy") {
        out.value("atom_energy_mismatch", led.atom_mismatch());
        out.check("atom-energy", led.atom_mismatch() <= 1e-12);
    }
    if want("ledger-order") {
        let mut residuals = vec![led.max_cumulative_residual];
        for k in 1..=s.run.refinements {
            let fine = SolverConfig { dt: cfg.dt / 2f64.powi(k as i32), ..cfg };
            let t = m.simulate_measure(&xi, &mu, &fine)?;
            residuals.push(ledger(&t, &track)?.max_cumulative_residual);
        }
        let ratios: Vec<f64> = residuals.windows(2).map(|w| w[0] / w[1]).collect();
        let [lo, hi] = s.params.ratio_band;
        out.check("ledger-order", !ratios.is_empty() && ratios.iter().all(|r| *r >= lo && *r <= hi));
        out.value("ledger_residuals", &residuals);
        out.value("ledger_ratios", &ratios);
    }
    if want("energy-decay") {
        let e: Vec<f64> = traj.states.iter().map(|x| m.nonlinearity.nonlinear_energy(x)).collect();
        out.check("energy-decay", mu.is_zero() && e.windows(2).all(|w| w[1] <= w[0] * (1.0 + 1e-10)));
        out.value("final_nonlinear_energy", e.last().copied());
    }
    if want("b-form") {
        let rep = perturbed_report(&traj, default_delta(m.gamma()));
        out.value("b_min_eigenvalue", rep.b_min_eigenvalue);
        out.check("b-form", rep.b_positive);
    }
    if want("dissipativity") {
        let ics: Vec<StatePair> =
            s.run.ensemble_energies.iter().enumerate().map(|(i, &e)| s.state_at(&g, e, i as u64 + 1)).collect();
        let global = s.global_forcing(&g)?;
        let rep = dissipativity_scan(&m, &ics, &global, s.run.tau_seconds, s.run.t_end_seconds, s.run.transient_seconds, &cfg)?;
        out.check("dissipativity", !ics.is_empty() && rep.spread <= 0.1 && rep.window_ratio <= s.params.spread_limit && rep.absorbed);
        out.value("dissipativity", &rep);
    }
    if want("strichartz-envelope") {
        let levels = if s.run.ensemble_energies.is_empty() { vec![1.0, 5.0, 10.0] } else { s.run.ensemble_energies.clone() };
        let rep = energy_to_strichartz_scan(&m, &levels, &mu, &[0.0, 1.0], 4, s.run.seed, &cfg)?;
        out.check("strichartz-envelope", rep.envelope_finite);
        out.value("strichartz_envelope", &rep.envelope);
        out.value("strichartz_raw_monotone", rep.raw_monotone);
        out.artifact("strichartz_scan.csv", rep.to_csv());
    }
    Ok(out)
}

/// Per-mode Duhamel integral by adaptive quadrature of the mode blocks.
fn quadrature_duhamel(prop: &LinearPropagator, xi: &StatePair, mu: &VectorMeasure) -> mdwave::Result<(Vec<f64>, Vec<f64>)> {
    let g = prop.grid();
    let gamma = prop.gamma();
    let (a, b) = mu.interval();
    let (u0, v0) = (xi.u.to_hilbert(), xi.v.to_hilbert());
    let breaks = mu.breakpoints();
    let mut u = Vec::with_capacity(g.hilbert_dim());
    let mut v = Vec::with_capacity(g.hilbert_dim());
    for (m, e) in g.basis().iter().enumerate() {
        let lambda = 1.0 + e.k2 as f64;
        let s = mode_block(lambda, gamma, b - a)?;
        let mut w = [s[0][0] * u0.coeffs()[m] + s[0][1] * v0.coeffs()[m], s[1][0] * u0.coeffs()[m] + s[1][1] * v0.coeffs()[m]];
        for at in mu.atoms().iter().filter(|at| at.time < b) {
            let k = mode_block(lambda, gamma, b - at.time)?;
            w[0] += k[0][1] * at.value.coeffs()[m];
            w[1] += k[1][1] * at.value.coeffs()[m];
        }
        for row in 0..2 {
            let f = |t: f64| mode_block(lambda, gamma, b - t).map(|k| k[row][1]).unwrap_or(f64::NAN) * mu.density_at(t).coeffs()[m];
            w[row] += breaks.windows(2).map(|p| adaptive_simpson(&f, p[0], p[1], 1e-13)).sum::<f64>();
        }
        u.push(w[0]);
        v.push(w[1]);
    }
    Ok((u, v))
}

fn linear_check(s: &Scenario, want: &dyn Fn(&str) -> bool) -> Outcome {
    let mut out = Summary::default();
    if want("mode-block") {
        let mut rng = member_rng(s.run.seed, 0);
        let (mut ode, mut semi) = (0.0f64, 0.0f64);
        for _ in 0..s.params.samples {
            let lambda: f64 = rng.gen_range(1.0..=1e4);
            let gamma: f64 = rng.gen_range(0.0..=10.0);
            let t: f64 = rng.gen_range(0.0..=5.0);
            let h: f64 = rng.gen_range(0.0..=5.0);
            let b = mode_block(lambda, gamma, t)?;
            let a = [[0.0, 1.0], [-lambda, -gamma]];
            let (l, r) = (block_mul(&a, &b), block_mul(&b, &a));
            let res = (0..4).map(|k| (l[k / 2][k % 2] - r[k / 2][k % 2]).abs()).fold(0.0, f64::max);
            ode = ode.max(res / (lambda + gamma + 1.0));
            let whole = mode_block(lambda, gamma, t + h)?;
            let prod = block_mul(&b, &mode_block(lambda, gamma, h)?);
            let d = [[whole[0][0] - prod[0][0], whole[0][1] - prod[0][1]], [whole[1][0] - prod[1][0], whole[1][1] - prod[1][1]]];
            semi = semi.max(energy_operator_norm(&d, lambda));
        }
        out.value("mode_block_residual", ode);
        out.value("semigroup_defect", semi);
        out.check("mode-block", ode <= 1e-12 && semi <= 1e-12);
    }
    let g = s.grid()?;
    if want("duhamel-oracle") {
        let prop = LinearPropagator::new(&g, s.model.gamma)?;
        let xi = s.initial_state(&g);
        let mu = s.window_forcing(&g)?;
        let exact = prop.duhamel(&xi, &mu)?;
        let (u, v) = quadrature_duhamel(&prop, &xi, &mu)?;
        let (eu, ev) = (exact.u.to_hilbert(), exact.v.to_hilbert());
        let (mut err2, mut norm2) = (0.0, 0.0);
        for (m, e) in g.basis().iter().enumerate() {
            let lambda = 1.0 + e.k2 as f64;
            err2 += lambda * (u[m] - eu.coeffs()[m]).powi(2) + (v[m] - ev.coeffs()[m]).powi(2);
            norm2 += lambda * u[m] * u[m] + v[m] * v[m];
        }
        let rel = (err2 / norm2).sqrt();
        out.value("duhamel_relative_error", rel);
        out.check("duhamel-oracle", rel <= 1e-8);
    }
    if want("decay") {
        let xi = s.initial_state(&g);
        let t_end = s.run.t_end_seconds - s.run.tau_seconds;
        let times: Vec<f64> = (0..=400).map(|i| t_end * i as f64 / 400.0).collect();
        let mut rows = Vec::new();
        let mut pass = true;
        for &gamma in &s.params.gammas {
            let prop = LinearPropagator::new(&g, gamma)?;
            let norms = times.iter().map(|&t| prop.propagate_homogeneous(&xi, t).map(|x| x.energy_norm())).collect::<mdwave::Result<Vec<_>>>()?;
            let rate = fit_decay(&times, &norms, 0.5 * t_end, t_end).unwrap_or(f64::NAN);
            let target = delta_star(gamma);
            pass &= if gamma <= 2.0 { rate >= target - 0.02 } else { (rate - target).abs() <= 0.01 };
            rows.push(vec![gamma, rate, target]);
        }
        out.value("decay_rates", &rows);
        out.artifact("decay.csv", csv(&["gamma", "fitted_rate", "delta_star"], rows));
        out.check("decay", pass);
    }
    Ok(out)
}

fn measure_approx(s: &Scenario, want: &dyn Fn(&str) -> bool) -> Outcome {
    let mut out = Summary::default();
    if want("delta-rate") {
        let mu = VectorMeasure::sampled_density(0.0, 1.0, 1, 4000, |t| HilbertVector::scalar((2.0 * PI * t).sin() + 0.3))?;
        let tv = mu.total_variation();
        let mut probes: Vec<f64> = (0..=20000).map(|i| i as f64 / 20000.0).collect();
        let mut rows = Vec::new();
        let mut tv_ok = true;
        for &n in &s.params.cells {
            probes.extend((0..n).flat_map(|k| {
                let x = k as f64 / n as f64;
                [x, (x + 1e-12).min(1.0), (x - 1e-12).max(0.0)]
            }));
            let approx = delta_approximation(&mu, n)?;
            tv_ok &= approx.total_variation() <= tv;
            let mut d: f64 = 0.0;
            for &t in &probes {
                d = d.max((mu.distribution(t)?.coeffs()[0] - approx.distribution(t)?.coeffs()[0]).abs());
            }
            rows.push(vec![n as f64, d, approx.total_variation()]);
        }
        let x: Vec<f64> = rows.iter().map(|r| r[0].ln()).collect();
        let y: Vec<f64> = rows.iter().map(|r| r[1].ln()).collect();
        let slope = mdwave::numerics::ls_slope(&x, &y);
        out.value("delta_slope", slope);
        out.value("delta_tv_bound", tv_ok);
        out.artifact("delta_approximation.csv", csv(&["cells", "sup_distance", "total_variation"], rows));
        out.check("delta-rate", slope <= -0.9 && tv_ok);
    }
    let g = s.grid()?;
    let mu = s.window_forcing(&g)?;
    if want("tail-variation") {
        let populated = mu
            .atoms()
            .iter()
            .map(|a| &a.value)
            .chain(mu.density().iter().map(|n| &n.value))
            .filter_map(|v| v.coeffs().iter().rposition(|c| *c != 0.0))
            .max()
            .map_or(0, |i| i + 1);
        let tvs = (0..=mu.dim()).map(|n| project_tail(&mu, n).map(|p| p.1)).collect::<mdwave::Result<Vec<_>>>()?;
        let monotone = tvs.windows(2).all(|w| w[1] <= w[0]);
        let vanishes = tvs[populated..].iter().all(|&t| t == 0.0);
        out.value("tail_variation", &tvs);
        out.value("populated_modes", populated);
        out.check("tail-variation", monotone && vanishes);
    }
    if want("weak-star") {
        let d = s
            .params
            .cells
            .iter()
            .map(|&n| weak_star_distance(&mollify(&mu, n)?, &mu, &TestFamily::default()))
            .collect::<mdwave::Result<Vec<_>>>()?;
        out.value("mollifier_weak_star", &d);
        out.check("weak-star", d.windows(2).all(|w| w[1] <= w[0]));
    }
    Ok(out)
}

fn attractor(s: &Scenario, want: &dyn Fn(&str) -> bool) -> Outcome {
    let g = s.grid()?;
    let m = model(s, &g)?;
    let mu = s.global_forcing(&g)?;
    let cfg = s.solver();
    let mut out = Summary::default();
    if want("translation") {
        let xi = s.initial_state(&g);
        let mut rng = member_rng(s.run.seed, 7);
        let mut worst: f64 = 0.0;
        for _ in 0..s.params.trials {
            let shift = rng.gen_range(-3.0..3.0);
            let tau = rng.gen_range(-2.0..2.0);
            let t = tau + rng.gen_range(0.5..2.0);
            worst = worst.max(translation_identity_check(&m, &mu, shift, t, tau, &xi, &cfg)?);
        }
        out.value("translation_residual", worst);
        out.check("translation", worst <= s.params.tolerance);
    }
    let shifts = if s.params.shifts_seconds.is_empty() { vec![0.0] } else { s.params.shifts_seconds.clone() };
    if want("hull-tv") {
        let hull = HullSample::new(mu.clone(), shifts.clone());
        let starts: Vec<f64> = (0..8).map(|i| 0.5 * i as f64).collect();
        let (base, worst) = hull.unit_tv_bound(&starts)?;
        out.value("hull_base_tv", base);
        out.value("hull_member_tv", worst);
        out.check("hull-tv", worst <= base * (1.0 + 1e-12));
    }
    if want("pullback") {
        let energies = if s.run.ensemble_energies.is_empty() { vec![s.run.initial_energy] } else { s.run.ensemble_energies.clone() };
        let initial: Vec<StatePair> = energies.iter().enumerate().map(|(i, &e)| s.state_at(&g, e, i as u64 + 1)).collect();
        let (_, rep) = pullback_attractor(&m, &mu, &initial, &s.params.horizons_seconds, &shifts, &cfg)?;
        let decreasing = rep.successive_energy.windows(2).all(|w| w[1] <= w[0]);
        out.value("pullback", &rep);
        out.check("pullback", !rep.successive_energy.is_empty() && decreasing);
    }
    Ok(out)
}

fn near(x: (f64, f64), lo: f64, hi: f64) -> bool {
    (x.0 - lo).abs() <= 0.1 && (x.1 - hi).abs() <= 0.1
}

fn kernel(s: &Scenario, want: &dyn Fn(&str) -> bool) -> Outcome {
    let mut out = Summary::default();
    if want("perturbed") {
        let p = kernel_vs_attractor(&KernelConfig::new(Some(s.params.spikes.unwrap_or(50.0))))?;
        out.check("perturbed", near(p.attractor, -2.0, 1.5) && near(p.kernel_union, -2.0, 1.0) && p.gap >= 0.4);
        out.value("perturbed", &p);
    }
    if want("unperturbed") {
        let u = kernel_vs_attractor(&KernelConfig::new(None))?;
        out.check("unperturbed", near(u.attractor, -2.0, 1.0) && near(u.kernel_union, -2.0, 1.0));
        out.value("unperturbed", &u);
    }
    Ok(out)
}

fn splitting(s: &Scenario) -> Outcome {
    let g = s.grid()?;
    let m = model(s, &g)?;
    let l = match s.params.shift_l {
        Some(l) => l,
        None => coercivity_threshold(&m.nonlinearity)?,
    };
    let cfg = SplittingConfig {
        l,
        alpha: s.model.alpha,
        solver: s.solver(),
        decay_from: s.run.tau_seconds,
        early_window: s.params.early_window_seconds,
    };
    let rep = splitting_run(&m, &s.initial_state(&g), &s.window_forcing(&g)?, &cfg)?;
    let mut out = Summary::default();
    out.check("reconstruction", rep.reconstruction_ok);
    out.check("v-decay", rep.v_decays);
    out.check("w-bounded", rep.w_bounded);
    out.value("splitting", &rep);
    Ok(out)
}

fn cascade(s: &Scenario) -> Outcome {
    let g = s.grid()?;
    let m = model(s, &g)?;
    let xi = s.initial_state(&g);
    let mu = s.window_forcing(&g)?;
    let reps = s
        .params
        .atom_counts
        .iter()
        .map(|&n| strichartz_cascade(&m, &xi, &mu, n, &s.solver()))
        .collect::<mdwave::Result<Vec<_>>>()?;
    let ce: Vec<f64> = reps.iter().map(|r| r.energy_constant).collect();
    let cs: Vec<f64> = reps.iter().map(|r| r.strichartz_constant).collect();
    let mut out = Summary::default();
    out.check("energy-constant", max_spread(&ce) < s.params.spread_limit);
    out.check("strichartz-constant", max_spread(&cs) < s.params.spread_limit);
    out.check("structure", reps.iter().all(|r| r.zero_before_atom && r.telescoping_residual <= 1e-12));
    out.value("cascade", &reps);
    Ok(out)
}

fn inequality(s: &Scenario, want: &dyn Fn(&str) -> bool) -> Outcome {
    let mut out = Summary::default();
    if want("kato-ponce") || want("product-bounds") {
        let rep = kato_ponce_check(&s.params.resolutions, s.params.samples, s.model.alpha, s.run.seed)?;
        if want("kato-ponce") {
            out.check("kato-ponce", rep.spread[0] < s.params.spread_limit);
        }
        if want("product-bounds") {
            out.check("product-bounds", rep.spread[1] < s.params.spread_limit && rep.spread[2] < s.params.spread_limit);
        }
        out.artifact(
            "ratios.csv",
            csv(
                &["cutoff", "difference", "product", "vanishing"],
                rep.rows.iter().map(|r| vec![r.cutoff as f64, r.difference, r.product, r.vanishing]),
            ),
        );
        out.value("kato_ponce", &rep);
    }
    if want("gronwall") {
        let (lam, delta, c) = (0.3, 1.0, 2.0);
        let times: Vec<f64> = (0..=2000).map(|i| 0.005 * i as f64).collect();
        let l = vec![lam; times.len()];
        let chk = gronwall_verify(&times, &vec![c; times.len()], &l, delta, c)?;
        let closed = times
            .iter()
            .zip(&chk.bound)
            .map(|(t, b)| (b - c * (1.0 + lam / (delta - lam) * (1.0 - (-(delta - lam) * t).exp()))).abs())
            .fold(0.0, f64::max);
        let doubled: Vec<f64> = chk.bound.iter().map(|b| 2.0 * b).collect();
        let rejects = !gronwall_verify(&times, &doubled, &l, delta, c)?.holds;
        out.value("gronwall_closed_form_error", closed);
        out.check("gronwall", chk.holds && closed <= 1e-4 && rejects);
    }
    Ok(out)
}

fn ode_demo(s: &Scenario, want: &dyn Fn(&str) -> bool) -> Outcome {
    let opts = OdeOptions::default();
    let ics: Vec<f64> = (0..=10).map(|i| -3.0 + 0.5 * i as f64).collect();
    let mut out = Summary::default();
    let range = |m: &ScalarModel, t0: f64, t1: f64, from: f64| -> mdwave::Result<(f64, f64)> {
        let mut r = (f64::INFINITY, f64::NEG_INFINITY);
        for &y0 in &ics {
            let (lo, hi) = ode_simulate(m, y0, t0, t1, &opts)?.range_after(from);
            r = (r.0.min(lo), r.1.max(hi));
        }
        Ok(r)
    };
    if want("plus-three") {
        let r = range(&ScalarModel::constant(3.0), 0.0, 40.0, 20.0)?;
        out.value("plus_three_range", r);
        out.check("plus-three", (r.0 + 1.0).abs() < 1e-3 && (r.1 - 1.0).abs() < 1e-3);
    }
    if want("minus-three") {
        let r = range(&ScalarModel::constant(-3.0), 0.0, 40.0, 20.0)?;
        out.value("minus_three_range", r);
        out.check("minus-three", (r.0 + 2.0).abs() < 1e-3 && (r.1 + 2.0).abs() < 1e-3);
    }
    if want("arctan") {
        let tr = ode_simulate(&ScalarModel::arctan(), -2.0, -400.0, 400.0, &opts)?;
        let early = tr.values[tr.times.partition_point(|&t| t < -200.0)];
        let late = tr.last();
        out.value("arctan_early_late", (early, late));
        out.check("arctan", (early + 2.0).abs() < 0.05 && (late + 1.0).abs() < 0.05);
        out.artifact("arctan.csv", csv(&["t", "y"], tr.times.iter().zip(&tr.values).map(|(t, y)| vec![*t, *y])));
    }
    if want("intervals") {
        let p = kernel_vs_attractor(&KernelConfig::new(s.params.spikes))?;
        let ok = match s.params.spikes {
            Some(_) => near(p.attractor, -2.0, 1.5) && near(p.kernel_union, -2.0, 1.0),
            None => near(p.attractor, -2.0, 1.0) && near(p.kernel_union, -2.0, 1.0),
        };
        out.check("intervals", ok);
        out.value("intervals", &p);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn scenario(body: &str) -> Scenario {
        Scenario::parse(body).unwrap()
    }

    #[test]
    fn unknown_check_is_rejected() {
        let s = scenario("name = \"x\"\nexperiment = \"cascade\"\nchecks = [\"jump\"]\n");
        assert!(matches!(selected_checks(&s), Err(ScenarioError::Parse(_))));
        assert!(matches!(run_experiment(&s), Err(RunError::Scenario(ScenarioError::Parse(_)))));
    }

    #[test]
    fn defaults_apply_without_checks() {
        let s = scenario("name = \"x\"\nexperiment = \"inequality\"\n");
        assert_eq!(selected_checks(&s).unwrap(), vec!["kato-ponce", "gronwall"]);
    }

    #[test]
    fn quadrature_matches_closed_form_duhamel() {
        let s = scenario(
            "name = \"x\"\nexperiment = \"linear-check\"\nchecks = [\"duhamel-oracle\"]\n[model]\ncutoff = 8\n\
             [forcing]\nkind = \"atoms\"\natoms = [{ time_seconds = 0.0, mode = 1, value = 1.0 }, { time_seconds = 0.4, mode = 0, value = -0.3 }]\n",
        );
        let out = run_experiment(&s).unwrap();
        assert!(out.checks["duhamel-oracle"]);
    }

    #[test]
    fn forced_run_fails_the_decay_check() {
        let s = scenario(
            "name = \"x\"\nexperiment = \"simulate\"\nchecks = [\"energy-decay\"]\n[forcing]\nkind = \"smooth\"\n[run]\nt_end_seconds = 0.5\n",
        );
        assert!(!run_experiment(&s).unwrap().checks["energy-decay"]);
    }

    #[test]
    fn spread_of_equal_values_is_one() {
        assert_eq!(max_spread(&[2.0, 2.0]), 1.0);
        assert!(max_spread(&[0.0, 1.0]).is_infinite());
    }
}
