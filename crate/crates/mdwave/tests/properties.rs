use proptest::prelude::*;

use mdwave::attractor::{gronwall_verify, hausdorff, kato_ponce_ratios, PRODUCT_PADDING};
use mdwave::dynamics::{ledger, SolverConfig, WaveModel};
use mdwave::measure::{delta_approximation, mollify, polar_decompose, project_tail, GlobalMeasure, HilbertVector, VectorMeasure};
use mdwave::propagator::{block_mul, energy_operator_norm, mode_block, ForcingTrack, LinearPropagator};
use mdwave::sampling::{member_rng, random_field, random_state};
use mdwave::spectral::{ModeGrid, Nonlinearity, SpectralField, StatePair};

fn measure_strategy(dim: usize) -> impl Strategy<Value = VectorMeasure> {
    let atoms = prop::collection::vec((0.0..1.0f64, prop::collection::vec(-2.0..2.0f64, dim)), 0..5);
    let nodes = prop::collection::vec(prop::collection::vec(-2.0..2.0f64, dim), 2..6);
    (atoms, nodes).prop_map(move |(atoms, nodes)| {
        let k = nodes.len() - 1;
        let nodes = nodes.into_iter().enumerate().map(|(i, v)| (i as f64 / k as f64, HilbertVector::from_vec(v))).collect();
        let atoms = atoms.into_iter().map(|(t, v)| (t, HilbertVector::from_vec(v))).collect();
        VectorMeasure::from_atoms(0.0, 1.0, dim, atoms)
            .unwrap()
            .add(&VectorMeasure::from_density(0.0, 1.0, dim, nodes).unwrap())
            .unwrap()
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn block_commutes_with_generator(lambda in 1.0..1e4f64, gamma in 0.0..10.0f64, t in 0.0..5.0f64) {
        let b = mode_block(lambda, gamma, t).unwrap();
        let a = [[0.0, 1.0], [-lambda, -gamma]];
        let (l, r) = (block_mul(&a, &b), block_mul(&b, &a));
        for i in 0..2 {
            for j in 0..2 {
                prop_assert!((l[i][j] - r[i][j]).abs() <= 1e-12 * (lambda + gamma + 1.0));
            }
        }
    }

    #[test]
    fn block_is_a_contraction_in_energy(lambda in 1.0..1e4f64, gamma in 0.0..10.0f64, t in 0.0..5.0f64) {
        let b = mode_block(lambda, gamma, t).unwrap();
        prop_assert!(energy_operator_norm(&b, lambda) <= 1.0 + 1e-12);
    }

    #[test]
    fn variation_dominates_every_window(mu in measure_strategy(3), s in 0.0..1.0f64, len in 0.0..1.0f64) {
        let t = (s + len).min(1.0);
        let window = mu.interval_value(s, t, true, true).unwrap().norm();
        let polar = polar_decompose(&mu).unwrap();
        prop_assert!(window <= polar.variation_of(s, t) * (1.0 + 1e-12) + 1e-12);
        prop_assert!(mu.restrict(s, t).unwrap().total_variation() <= mu.total_variation() * (1.0 + 1e-12) + 1e-12);
    }

    #[test]
    fn polar_form_reconstructs_windows(mu in measure_strategy(2), s in 0.0..0.5f64, t in 0.5..1.0f64) {
        let polar = polar_decompose(&mu).unwrap();
        let direct = mu.interval_value(s, t, true, false).unwrap();
        let rebuilt = polar.reconstruct(s, t, true, false);
        prop_assert!(direct.sub(&rebuilt).norm() <= 1e-9 * (1.0 + direct.norm()));
    }

    #[test]
    fn distribution_is_additive(mu in measure_strategy(2), s in 0.0..1.0f64, t in 0.0..1.0f64) {
        let (s, t) = (s.min(t), s.max(t));
        let lhs = mu.distribution(t).unwrap().sub(&mu.distribution(s).unwrap());
        let rhs = mu.interval_value(s, t, true, false).unwrap();
        prop_assert!(lhs.sub(&rhs).norm() <= 1e-12 * (1.0 + mu.total_variation()));
    }

    #[test]
    fn approximants_keep_mass_and_variation(mu in measure_strategy(2), n in 1usize..40) {
        let tv = mu.total_variation();
        let d = delta_approximation(&mu, n).unwrap();
        prop_assert!(d.is_atomic());
        prop_assert!(d.total_variation() <= tv * (1.0 + 1e-12) + 1e-14);
        prop_assert!(d.mass().sub(&mu.mass()).norm() <= 1e-12 * (1.0 + tv));
        let m = mollify(&mu, n).unwrap();
        prop_assert!(m.is_absolutely_continuous());
        prop_assert!(m.total_variation() <= tv * (1.0 + 1e-9) + 1e-12);
    }

    #[test]
    fn tail_variation_is_monotone(mu in measure_strategy(4)) {
        let tvs: Vec<f64> = (0..=4).map(|n| project_tail(&mu, n).unwrap().1).collect();
        prop_assert!(tvs.windows(2).all(|w| w[1] <= w[0] * (1.0 + 1e-12)));
        prop_assert_eq!(tvs[4], 0.0);
    }

    #[test]
    fn hilbert_coordinates_are_isometric(seed in any::<u64>()) {
        let g = ModeGrid::new(1, 16, 3).unwrap();
        let f = random_field(&g, &mut member_rng(seed, 0), 1.0);
        let h = f.to_hilbert();
        prop_assert!((h.norm() - f.norm_l2()).abs() <= 1e-12 * (1.0 + h.norm()));
        prop_assert_eq!(SpectralField::from_hilbert(&g, &h).unwrap().sub(&f).norm_l2() <= 1e-13, true);
    }

    #[test]
    fn linear_flow_is_linear(seed in any::<u64>(), c in -3.0..3.0f64, t in 0.0..3.0f64) {
        let g = ModeGrid::new(1, 8, 3).unwrap();
        let p = LinearPropagator::new(&g, 0.8).unwrap();
        let x = random_state(&g, &mut member_rng(seed, 0), 1.0);
        let y = random_state(&g, &mut member_rng(seed, 1), 2.0);
        let mut comb = x.clone();
        comb.axpy(c, &y);
        let lhs = p.propagate_homogeneous(&comb, t).unwrap();
        let mut rhs = p.propagate_homogeneous(&x, t).unwrap();
        rhs.axpy(c, &p.propagate_homogeneous(&y, t).unwrap());
        prop_assert!(lhs.sub(&rhs).energy_norm() <= 1e-12 * (1.0 + comb.energy_norm()));
    }

    #[test]
    fn product_ratios_are_finite(seed in any::<u64>()) {
        let g = ModeGrid::new(1, 16, PRODUCT_PADDING).unwrap();
        let v = random_field(&g, &mut member_rng(seed, 0), 1.5);
        let w = random_field(&g, &mut member_rng(seed, 1), 1.5);
        let r = kato_ponce_ratios(&v, &w, 0.25).unwrap();
        prop_assert!(r.iter().flatten().all(|x| x.is_finite() && *x >= 0.0));
    }

    #[test]
    fn gronwall_accepts_its_own_bound(lam in 0.0..0.9f64, delta in 1.0..3.0f64, c in 0.1..5.0f64) {
        let times: Vec<f64> = (0..=200).map(|i| 0.05 * i as f64).collect();
        let l = vec![lam; times.len()];
        let chk = gronwall_verify(&times, &vec![c; times.len()], &l, delta, c).unwrap();
        prop_assert!(chk.holds);
        prop_assert!(gronwall_verify(&times, &chk.bound, &l, delta, c).unwrap().holds);
    }

    #[test]
    fn hausdorff_is_symmetric(a in prop::collection::vec(-5.0..5.0f64, 1..8), b in prop::collection::vec(-5.0..5.0f64, 1..8)) {
        let d = |x: &f64, y: &f64| (x - y).abs();
        prop_assert_eq!(hausdorff(&a, &b, d), hausdorff(&b, &a, d));
        prop_assert_eq!(hausdorff(&a, &a, d), 0.0);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn jumps_equal_atoms(times in prop::collection::vec(0.01..1.99f64, 1..6), seed in any::<u64>()) {
        let g = ModeGrid::new(1, 8, 3).unwrap();
        let dim = g.hilbert_dim();
        let atoms: Vec<(f64, HilbertVector)> =
            times.iter().enumerate().map(|(i, &t)| (t, random_field(&g, &mut member_rng(seed, i as u64), 0.5).to_hilbert())).collect();
        let mu = VectorMeasure::from_atoms(0.0, 2.0, dim, atoms).unwrap();
        let model = WaveModel::new(&g, 1.0, Nonlinearity::quintic()).unwrap();
        let xi = random_state(&g, &mut member_rng(seed, 99), 0.5);
        let traj = model.simulate_measure(&xi, &mu, &SolverConfig::with_dt(0.05)).unwrap();
        for i in traj.atom_indices() {
            let h = SpectralField::from_hilbert(&g, &mu.atom_at(traj.times[i])).unwrap();
            let jump = traj.post_state(i).v.sub(&traj.states[i].v);
            prop_assert!(jump.sub(&h).norm_l2() <= 1e-14 * h.norm_l2().max(1.0));
        }
        let led = ledger(&traj, &ForcingTrack::new(&g, &mu).unwrap()).unwrap();
        prop_assert!(led.atom_mismatch() <= 1e-12);
    }

    #[test]
    fn unforced_energy_never_grows(seed in any::<u64>(), e in 0.1..2.0f64) {
        let g = ModeGrid::new(1, 16, 3).unwrap();
        let model = WaveModel::new(&g, 1.0, Nonlinearity::quintic()).unwrap();
        let xi = random_state(&g, &mut member_rng(seed, 0), e);
        let traj = model.simulate(&xi, 0.0, 3.0, &GlobalMeasure::zero(g.hilbert_dim()), &SolverConfig::with_dt(0.01)).unwrap();
        let energies: Vec<f64> = traj.states.iter().map(|s: &StatePair| model.nonlinearity.nonlinear_energy(s)).collect();
        prop_assert!(energies.windows(2).all(|w| w[1] <= w[0] * (1.0 + 1e-10)));
    }
}
