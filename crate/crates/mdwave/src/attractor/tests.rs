use super::*;
use crate::dynamics::{OdeOptions, ScalarModel, SolverConfig, WaveModel};
use crate::measure::{mollify, GlobalMeasure, HilbertVector, VectorMeasure};
use crate::spectral::{Grid, ModeGrid, Nonlinearity, Perturbation, SpectralField, StatePair};

fn grid(n: usize) -> Grid {
    ModeGrid::new(1, n, 3).unwrap()
}

fn state(g: &Grid, amp: f64) -> StatePair {
    let u = SpectralField::cosine(g, [1, 0, 0], amp).unwrap();
    let v = SpectralField::cosine(g, [2, 0, 0], -0.5 * amp).unwrap();
    StatePair::new(u, v).unwrap()
}

fn smooth(g: &Grid, a: f64, b: f64, amp: f64) -> VectorMeasure {
    let dim = g.hilbert_dim();
    VectorMeasure::sampled_density(a, b, dim, ((b - a) * 100.0).ceil() as usize, |t| {
        let mut v = HilbertVector::zeros(dim);
        v.coeffs_mut()[0] = amp * t.sin();
        v.coeffs_mut()[1] = 0.5 * amp * (2.0 * t).cos();
        v
    })
    .unwrap()
}

#[test]
fn hausdorff_of_point_sets() {
    let d = |a: &f64, b: &f64| (a - b).abs();
    assert_eq!(hausdorff(&[0.0, 1.0], &[0.0, 1.0], d), 0.0);
    assert_eq!(hausdorff(&[0.0], &[0.0, 2.0], d), 2.0);
    assert_eq!(diameter(&[0.0, 0.5, 3.0], d), 3.0);
}

#[test]
fn translation_identity_on_atoms_and_density() {
    let g = grid(8);
    let m = WaveModel::new(&g, 1.0, Nonlinearity::quintic()).unwrap();
    let cfg = SolverConfig::with_dt(0.05);
    let xi = state(&g, 0.3);
    let atoms = VectorMeasure::from_atoms(0.0, 1.0, g.hilbert_dim(), vec![(0.35, HilbertVector::basis(7, 1))]).unwrap();
    let periodic = GlobalMeasure::periodic(atoms, 1.0, 0.0).unwrap();
    assert_eq!(translation_identity_check(&m, &periodic, 0.0, 1.0, 0.0, &xi, &cfg).unwrap(), 0.0);
    assert!(translation_identity_check(&m, &periodic, 0.25, 1.5, 0.0, &xi, &cfg).unwrap() <= 1e-13);
    let dens = GlobalMeasure::periodic(smooth(&g, 0.0, 2.0, 0.5), 2.0, 0.0).unwrap();
    assert!(translation_identity_check(&m, &dens, 0.7, 1.2, -0.3, &xi, &cfg).unwrap() <= 1e-10);
}

#[test]
fn hull_members_respect_the_base_bound() {
    let g = grid(8);
    let base = GlobalMeasure::periodic(smooth(&g, 0.0, 2.0, 1.0), 2.0, 0.0).unwrap();
    let hull = HullSample::uniform(base, 2.0, 8);
    let starts: Vec<f64> = (0..8).map(|i| 0.25 * i as f64).collect();
    let (b, worst) = hull.unit_tv_bound(&starts).unwrap();
    assert!(worst <= b * (1.0 + 1e-12));
    assert_eq!(hull.windows(0.0, 1.0).unwrap().len(), 8);
}

#[test]
fn pullback_collapses_without_forcing() {
    let g = grid(8);
    let m = WaveModel::new(&g, 2.0, Nonlinearity::quintic()).unwrap();
    let mu = GlobalMeasure::zero(g.hilbert_dim());
    let init: Vec<StatePair> = [0.5, -0.5, 1.0].iter().map(|&a| state(&g, a)).collect();
    let (img, rep) = pullback_attractor(&m, &mu, &init, &[2.0, 4.0, 8.0], &[0.0], &SolverConfig::with_dt(0.05)).unwrap();
    assert_eq!(img.images.len(), 3);
    assert!(rep.diameters.windows(2).all(|w| w[1] < w[0]));
    assert!(rep.diameters[2] < 0.05);
    assert!(rep.successive_energy[1] < rep.successive_energy[0]);
}

#[test]
fn scalar_pullback_traces_the_unperturbed_kernel() {
    let shifts: Vec<f64> = (-8..=8).map(|i| 25.0 * i as f64).collect();
    let out = scalar_pullback(&ScalarModel::arctan(), &[-3.0, 0.0, 2.0], &[400.0], &shifts, &OdeOptions::default()).unwrap();
    let (_, lo, hi) = out[0];
    assert!((lo + 2.0).abs() < 0.1, "{lo}");
    assert!((hi + 1.0).abs() < 0.1, "{hi}");
}

#[test]
fn cubic_attractor_is_unit_interval() {
    let init: Vec<f64> = (0..=10).map(|i| -3.0 + 0.5 * i as f64).collect();
    let (lo, hi) = cubic_attractor(&init, 15.0, &OdeOptions::default()).unwrap();
    assert!((lo + 1.0).abs() < 1e-3 && (hi - 1.0).abs() < 1e-3);
}

#[test]
fn kicks_lift_the_attractor_but_not_the_kernels() {
    let perturbed = kernel_vs_attractor(&KernelConfig::new(Some(50.0))).unwrap();
    assert!((perturbed.attractor.0 + 2.0).abs() < 0.1 && (perturbed.attractor.1 - 1.5).abs() < 0.1, "{perturbed:?}");
    assert!((perturbed.kernel_union.0 + 2.0).abs() < 0.1 && (perturbed.kernel_union.1 - 1.0).abs() < 0.1, "{perturbed:?}");
    assert!(perturbed.gap >= 0.4);
    let plain = kernel_vs_attractor(&KernelConfig::new(None)).unwrap();
    assert!((plain.attractor.1 - plain.kernel_union.1).abs() < 0.1, "{plain:?}");
    assert!((plain.attractor.0 + 2.0).abs() < 0.1 && (plain.attractor.1 - 1.0).abs() < 0.1);
}

#[test]
fn coercivity_grid() {
    assert_eq!(coercivity_threshold(&Nonlinearity::quintic()).unwrap(), 0.0);
    let focusing_cubic = Nonlinearity::quintic().with_h(Perturbation::Cubic(-4.0));
    let l = coercivity_threshold(&focusing_cubic).unwrap();
    assert!(l > 0.0 && coercive(&focusing_cubic, l) && !coercive(&focusing_cubic, l / 2.0));
}

#[test]
fn splitting_of_zero_data_is_zero() {
    let g = grid(8);
    let m = WaveModel::new(&g, 1.0, Nonlinearity::quintic()).unwrap();
    let mu = VectorMeasure::zero(0.0, 1.0, g.hilbert_dim());
    let run = split_evolve(&m, &StatePair::zeros(&g), &mu, 0.0, &SolverConfig::with_dt(0.1)).unwrap();
    assert!(run.theta.iter().chain(&run.v).chain(&run.w).all(StatePair::is_zero));
}

#[test]
fn splitting_rejects_small_shift() {
    let g = grid(8);
    let m = WaveModel::new(&g, 1.0, Nonlinearity::quintic().with_h(Perturbation::Cubic(-4.0))).unwrap();
    let cfg = SplittingConfig { l: 0.0, alpha: 0.25, solver: SolverConfig::with_dt(0.1), decay_from: 0.0, early_window: 0.5 };
    let mu = VectorMeasure::zero(0.0, 1.0, g.hilbert_dim());
    assert!(matches!(splitting_run(&m, &state(&g, 0.1), &mu, &cfg), Err(crate::Error::Config(_))));
}

#[test]
fn splitting_reconstructs_the_solution() {
    let g = grid(16);
    let m = WaveModel::new(&g, 1.0, Nonlinearity::quintic()).unwrap();
    let mu = smooth(&g, 0.0, 4.0, 0.5);
    let cfg = SplittingConfig { l: 0.0, alpha: 0.25, solver: SolverConfig::with_dt(0.02), decay_from: 1.0, early_window: 1.0 };
    let rep = splitting_run(&m, &state(&g, 1.0), &mu, &cfg).unwrap();
    assert!(rep.reconstruction_ok, "{rep:?}");
    assert!(rep.reconstruction < 1e-10);
}

#[test]
fn cascade_single_atom_and_zero() {
    let g = grid(8);
    let m = WaveModel::new(&g, 1.0, Nonlinearity::quintic()).unwrap();
    let cfg = SolverConfig::with_dt(0.05);
    let xi = state(&g, 0.3);
    let h = HilbertVector::basis(7, 1).scale(0.4);
    let one = VectorMeasure::from_atoms(0.0, 1.0, 7, vec![(0.5, h)]).unwrap();
    let rep = strichartz_cascade(&m, &xi, &one, 4, &cfg).unwrap();
    assert_eq!(rep.atoms, 1);
    assert!(rep.zero_before_atom);
    assert!(rep.energy_constant >= 1.0 - 1e-12);
    assert!(rep.telescoping_residual <= 1e-14);
    let zero = VectorMeasure::zero(0.0, 1.0, 7);
    let rep = strichartz_cascade(&m, &xi, &zero, 4, &cfg).unwrap();
    assert_eq!(rep.atoms, 0);
    assert_eq!(rep.strichartz_constant, 0.0);
}

#[test]
fn cascade_of_smooth_density() {
    let g = grid(8);
    let m = WaveModel::new(&g, 1.0, Nonlinearity::quintic()).unwrap();
    let rep = strichartz_cascade(&m, &state(&g, 0.5), &smooth(&g, 0.0, 1.0, 1.0), 4, &SolverConfig::with_dt(0.01)).unwrap();
    assert_eq!(rep.atoms, 4);
    assert!(rep.zero_before_atom);
    assert!(rep.telescoping_residual <= 1e-12);
    assert!(rep.energy_ratios.iter().all(|r| r.is_finite() && *r >= 1.0 - 1e-9));
}

#[test]
fn scan_without_data_is_zero() {
    let g = grid(8);
    let m = WaveModel::new(&g, 1.0, Nonlinearity::quintic()).unwrap();
    let mu = VectorMeasure::zero(0.0, 1.0, 7);
    let rep = energy_to_strichartz_scan(&m, &[0.0], &mu, &[0.0], 2, 1, &SolverConfig::with_dt(0.05)).unwrap();
    assert!(rep.rows.iter().all(|r| r.strichartz == 0.0));
    let rep = energy_to_strichartz_scan(&m, &[1.0, 2.0], &smooth(&g, 0.0, 1.5, 0.5), &[0.0, 1.0], 3, 1, &SolverConfig::with_dt(0.05)).unwrap();
    assert_eq!(rep.rows.len(), 12);
    assert!(rep.envelope_finite && rep.envelope.windows(2).all(|w| w[1].1 >= w[0].1));
    assert!(rep.to_csv().lines().count() == 13);
}

#[test]
fn kato_ponce_trivial_cases() {
    let g = ModeGrid::new(1, 16, PRODUCT_PADDING).unwrap();
    let (v, w) = kato_ponce_pair(&g, 3, 0);
    let r = kato_ponce_ratios(&v, &SpectralField::zeros(&g), 0.25).unwrap();
    assert!(r.iter().all(|x| x.is_none()));
    let r = kato_ponce_ratios(&v, &w, 0.25).unwrap();
    assert!(r.iter().all(|x| x.is_some_and(|x| x.is_finite() && x > 0.0)));
    let r = kato_ponce_ratios(&SpectralField::zeros(&g), &w, 0.25).unwrap();
    assert_eq!(r[1], Some(0.0));
    assert!(r[2].is_none());
    assert!(kato_ponce_check(&[16], 2, 0.5, 0).is_err());
}

#[test]
fn kato_ponce_pairs_nest_across_resolutions() {
    let coarse = ModeGrid::new(1, 16, PRODUCT_PADDING).unwrap();
    let fine = ModeGrid::new(1, 32, PRODUCT_PADDING).unwrap();
    let (vc, _) = kato_ponce_pair(&coarse, 9, 4);
    let (vf, _) = kato_ponce_pair(&fine, 9, 4);
    assert_eq!(vc.coeff([3, 0, 0]), vf.coeff([3, 0, 0]));
}

#[test]
fn gronwall_constant_and_closed_form() {
    let times: Vec<f64> = (0..=2000).map(|i| i as f64 * 0.005).collect();
    let zeros = vec![0.0; times.len()];
    let c = 2.0;
    let chk = gronwall_verify(&times, &vec![c; times.len()], &zeros, 1.0, c).unwrap();
    assert!(chk.holds && chk.worst_excess == 0.0);
    let (lam, delta) = (0.3, 1.0);
    let ls = vec![lam; times.len()];
    let chk = gronwall_verify(&times, &vec![c; times.len()], &ls, delta, c).unwrap();
    for (t, b) in times.iter().zip(&chk.bound) {
        let exact = c * (1.0 + lam / (delta - lam) * (1.0 - (-(delta - lam) * t).exp()));
        assert!((b - exact).abs() <= 1e-5 * exact);
    }
    let doubled: Vec<f64> = chk.bound.iter().map(|b| 2.0 * b).collect();
    assert!(!gronwall_verify(&times, &doubled, &ls, delta, c).unwrap().holds);
}

#[test]
fn weak_star_distances() {
    let g = grid(8);
    let mu = smooth(&g, 0.0, 1.0, 1.0);
    assert_eq!(weak_star_distance(&mu, &mu, &TestFamily::default()).unwrap(), 0.0);
    let zero = VectorMeasure::zero(0.0, 1.0, 1);
    let pair = |n: f64| {
        let x = 0.5;
        VectorMeasure::from_atoms(0.0, 1.0, 1, vec![(x, HilbertVector::scalar(1.0)), (x + 1.0 / (n * n), HilbertVector::scalar(-1.0))]).unwrap()
    };
    let d: Vec<f64> = [2.0, 4.0, 8.0, 16.0].iter().map(|&n| weak_star_distance(&pair(n), &zero, &TestFamily::default()).unwrap()).collect();
    assert!(d.windows(2).all(|w| w[1] < w[0]), "{d:?}");
    let atom = VectorMeasure::from_atoms(0.0, 1.0, 7, vec![(0.3, HilbertVector::basis(7, 0))]).unwrap();
    let m: Vec<f64> = [4, 16, 64].iter().map(|&n| weak_star_distance(&mollify(&atom, n).unwrap(), &atom, &TestFamily::default()).unwrap()).collect();
    assert!(m.windows(2).all(|w| w[1] < w[0]), "{m:?}");
}
