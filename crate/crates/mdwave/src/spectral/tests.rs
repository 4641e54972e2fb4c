use std::f64::consts::PI;

use num_complex::Complex64;

use super::*;
use crate::measure::HilbertVector;

fn sample_field(grid: &Grid) -> SpectralField {
    let a = SpectralField::cosine(grid, [1, 0, 0], 0.7).unwrap();
    let mut coeffs = vec![Complex64::new(0.0, 0.0); grid.slots()];
    let s = grid.slot_of([2, 0, 0]).unwrap();
    coeffs[s] = Complex64::new(0.0, -0.15);
    coeffs[grid.neg_slot(s)] = Complex64::new(0.0, 0.15);
    a.add(&SpectralField::from_coeffs(grid, coeffs).unwrap())
}

#[test]
fn quintic_of_cosine_matches_power_reduction() {
    // cos⁵x = (10 cos x + 5 cos 3x + cos 5x) / 16
    for p in [3, 4] {
        let g = ModeGrid::new(1, 16, p).unwrap();
        let u = SpectralField::cosine(&g, [1, 0, 0], 1.0).unwrap();
        let f = Nonlinearity::quintic().apply(&u);
        for (k, want) in [(1, 10.0 / 32.0), (3, 5.0 / 32.0), (5, 1.0 / 32.0), (2, 0.0), (7, 0.0)] {
            let c = f.coeff([k, 0, 0]);
            assert!((c.re - want).abs() < 1e-14 && c.im.abs() < 1e-14, "p={p} k={k}: {c}");
        }
    }
}

#[test]
fn truncation_is_alias_free_for_degree_five() {
    let g3 = ModeGrid::new(1, 12, 3).unwrap();
    let g4 = ModeGrid::new(1, 12, 4).unwrap();
    let mut c3 = vec![Complex64::new(0.0, 0.0); g3.slots()];
    for k in 1..6i64 {
        let s = g3.slot_of([k, 0, 0]).unwrap();
        c3[s] = Complex64::new(0.3 / k as f64, 0.1 * k as f64 / 5.0);
        c3[g3.neg_slot(s)] = c3[s].conj();
    }
    let u3 = SpectralField::from_coeffs(&g3, c3.clone()).unwrap();
    let u4 = SpectralField::from_coeffs(&g4, c3).unwrap();
    let n = Nonlinearity::quintic().with_linear(0.5);
    let (f3, f4) = (n.apply(&u3), n.apply(&u4));
    for (a, b) in f3.coeffs().iter().zip(f4.coeffs()) {
        assert!((a - b).norm() < 1e-13);
    }
}

#[test]
fn parseval_and_hilbert_isometry() {
    let g = ModeGrid::new(1, 10, 3).unwrap();
    let u = sample_field(&g);
    let l2 = u.norm_l2();
    let want = (PI * (0.49 + 0.09)).sqrt();
    assert!((l2 - want).abs() < 1e-13);
    assert!((u.norm_lp(Exponent::P(2.0)) - want).abs() < 1e-12);
    let h = u.to_hilbert();
    assert!((h.norm() - want).abs() < 1e-13);
    let back = SpectralField::from_hilbert(&g, &h).unwrap();
    assert!(back.sub(&u).norm_l2() < 1e-15);
    // H¹ weights 1+k²
    let h1 = (PI * (0.49 * 2.0 + 0.09 * 5.0)).sqrt();
    assert!((u.norm_hs(1.0) - h1).abs() < 1e-13);
}

#[test]
fn basis_vectors_are_orthonormal_fields() {
    let g = ModeGrid::new(3, 4, 3).unwrap();
    for i in [0, 1, 2, 7, 26] {
        let ei = SpectralField::from_hilbert(&g, &HilbertVector::basis(27, i)).unwrap();
        assert!((ei.norm_l2() - 1.0).abs() < 1e-13);
        let vals = ei.to_physical();
        assert!((grid_lp(&g, &vals, Exponent::P(2.0)) - 1.0).abs() < 1e-12);
        let ej = SpectralField::from_hilbert(&g, &HilbertVector::basis(27, (i + 3) % 27)).unwrap();
        assert!(ei.inner(&ej).abs() < 1e-14);
    }
}

#[test]
fn constant_lebesgue_norms() {
    for d in [1usize, 3] {
        let g = ModeGrid::new(d, 4, 3).unwrap();
        let c = SpectralField::constant(&g, -1.5);
        let vol = (2.0 * PI).powi(d as i32);
        for p in [1.0, 2.0, 6.0, 12.0] {
            let want = 1.5 * vol.powf(1.0 / p);
            assert!((c.norm_lp(Exponent::P(p)) - want).abs() < 1e-12 * want);
        }
        assert!((c.norm_lp(Exponent::Inf) - 1.5).abs() < 1e-14);
    }
}

#[test]
fn energy_norm_pythagoras() {
    let g = ModeGrid::new(1, 8, 3).unwrap();
    let a = StatePair::new(SpectralField::cosine(&g, [1, 0, 0], 1.0).unwrap(), SpectralField::zeros(&g)).unwrap();
    let b = StatePair::new(SpectralField::zeros(&g), SpectralField::cosine(&g, [2, 0, 0], 2.0).unwrap()).unwrap();
    let s = a.add(&b);
    assert!((s.energy_norm().powi(2) - a.energy_norm().powi(2) - b.energy_norm().powi(2)).abs() < 1e-12);
    // ‖cos x‖²_{H¹} = 2π
    assert!((a.energy_norm().powi(2) - 2.0 * PI).abs() < 1e-12);
}

#[test]
fn potential_energy_matches_fine_quadrature() {
    let g = ModeGrid::new(1, 10, 3).unwrap();
    let u = sample_field(&g);
    for n in [Nonlinearity::quintic(), Nonlinearity::quintic().with_h(Perturbation::Cubic(-2.0)), Nonlinearity::quintic().with_h(Perturbation::Sine).with_linear(0.3)] {
        let fine = 20_000;
        let h = 2.0 * PI / fine as f64;
        let direct: f64 = (0..fine)
            .map(|i| {
                let x = i as f64 * h;
                n.antiderivative(0.7 * x.cos() + 0.3 * (2.0 * x).sin())
            })
            .sum::<f64>()
            * h;
        let got = n.potential_energy(&u);
        let tol = if matches!(n.h, Perturbation::Sine) { 1e-6 } else { 1e-12 };
        assert!((got - direct).abs() < tol, "{got} vs {direct}");
    }
}

#[test]
fn interpolation_between_sobolev_norms() {
    let g = ModeGrid::new(1, 16, 3).unwrap();
    let u = sample_field(&g).add(&SpectralField::cosine(&g, [5, 0, 0], 0.2).unwrap());
    let (a0, a1, th) = (0.0, 2.0, 0.3);
    let mid = u.norm_hs((1.0 - th) * a0 + th * a1);
    assert!(mid <= u.norm_hs(a0).powf(1.0 - th) * u.norm_hs(a1).powf(th) + 1e-12);
}

#[test]
fn projection_and_sample_norm() {
    let g = ModeGrid::new(1, 16, 6).unwrap();
    let u = sample_field(&g).add(&SpectralField::cosine(&g, [6, 0, 0], 0.2).unwrap());
    let p = u.project(4);
    assert_eq!(p.coeff([6, 0, 0]), Complex64::new(0.0, 0.0));
    assert_eq!(p.coeff([2, 0, 0]), u.coeff([2, 0, 0]));
    let s = sample_norm_hs(&g, &u.to_physical(), 1.5).unwrap();
    assert!((s - u.norm_hs(1.5)).abs() < 1e-12 * s);
}

#[test]
fn field_dump_round_trip() {
    let g = ModeGrid::new(3, 4, 3).unwrap();
    let h = HilbertVector::from_vec((0..27).map(|i| (i as f64 * 0.37).sin()).collect());
    let u = SpectralField::from_hilbert(&g, &h).unwrap();
    let mut buf = Vec::new();
    io::write_field(&mut buf, &u).unwrap();
    let back = io::read_field(&buf[..]).unwrap();
    assert!(back.sub(&u).norm_l2() < 1e-14);
}
