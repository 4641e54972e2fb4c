//! Approximation schemes: purely atomic (delta), purely absolutely continuous
//! (mollified), spectral tails, and the regularity gaps built from them.

use super::{HilbertVector, Node, VectorMeasure};
use crate::{Error, Result};

/// Purely atomic approximant on the uniform `n`-cell grid.
///
/// The density part on `[t_k, t_{k+1})` collapses to an atom at `t_k`; existing atoms
/// are kept as they are and merged with the new ones.
pub fn delta_approximation(mu: &VectorMeasure, n: usize) -> Result<VectorMeasure> {
    if n == 0 {
        return Err(Error::precondition("delta_approximation needs n >= 1"));
    }
    let (a, b) = mu.interval();
    let grid = uniform_grid(a, b, n);
    let mut atoms: Vec<(f64, HilbertVector)> =
        mu.atoms().iter().map(|at| (at.time, at.value.clone())).collect();
    if !mu.density().is_empty() {
        for k in 0..n {
            let v = mu.density_integral(grid[k], grid[k + 1]);
            if !v.is_zero() {
                atoms.push((grid[k], v));
            }
        }
    }
    VectorMeasure::from_atoms(a, b, mu.dim(), atoms)
}

/// `n + 1` grid points with exact endpoints.
pub(crate) fn uniform_grid(a: f64, b: f64, n: usize) -> Vec<f64> {
    (0..=n).map(|k| if k == n { b } else { a + (b - a) * k as f64 / n as f64 }).collect()
}

/// Absolutely continuous approximant with one-sided box kernel of width `1/n`.
///
/// The mass of `μ` near `s` is spread over `(s, s + 1/n]`, which keeps
/// `Φ_n(t) → Φ(t)` at every `t ∈ [a, b)` for the left-continuous `Φ`. The output
/// is piecewise constant on cells of width at most `1/(4n)` carrying exact cell averages;
/// atom boxes are resolved exactly.
pub fn mollify(mu: &VectorMeasure, n: usize) -> Result<VectorMeasure> {
    if n == 0 {
        return Err(Error::precondition("mollify needs n >= 1"));
    }
    let (a, b) = mu.interval();
    let dim = mu.dim();
    if mu.is_zero() || b <= a {
        return Ok(VectorMeasure::zero(a, b, dim));
    }
    let eps = 1.0 / n as f64;
    let cells = ((b - a) * 4.0 * n as f64).ceil().max(1.0) as usize;
    let mut grid = uniform_grid(a, b, cells);
    let tol = 1e-12 * (b - a);
    // atom boxes start and end on cell edges
    for at in mu.atoms() {
        for x in [at.time, at.time + eps] {
            if x > a + tol && x < b - tol {
                grid.push(x);
            }
        }
    }
    grid.sort_by(f64::total_cmp);
    grid.dedup_by(|x, y| (*x - *y).abs() <= tol);
    let cells = grid.len() - 1;
    let table = PrimitiveTable::new(mu);
    let j_here: Vec<HilbertVector> = grid.iter().map(|&x| table.eval(x)).collect();
    let j_back: Vec<HilbertVector> = grid.iter().map(|&x| table.eval(x - eps)).collect();
    let mut nodes = Vec::with_capacity(2 * cells);
    for k in 0..cells {
        let width = grid[k + 1] - grid[k];
        let mut v = j_here[k + 1].sub(&j_here[k]);
        v.axpy(-1.0, &j_back[k + 1]);
        v.add_assign(&j_back[k]);
        let v = v.scale(n as f64 / width);
        nodes.push(Node { time: grid[k], value: v.clone() });
        nodes.push(Node { time: grid[k + 1], value: v });
    }
    VectorMeasure::new(a, b, dim, Vec::new(), nodes)
}

/// Zeroes the first `n_modes` coordinates of every value. Returns `(Q_N μ, TV(Q_N μ))`.
pub fn project_tail(mu: &VectorMeasure, n_modes: usize) -> Result<(VectorMeasure, f64)> {
    if n_modes > mu.dim() {
        return Err(Error::precondition(format!("cutoff {n_modes} exceeds dimension {}", mu.dim())));
    }
    let q = mu.map_values(|v| {
        let mut w = v.clone();
        w.coeffs_mut()[..n_modes].iter_mut().for_each(|c| *c = 0.0);
        w
    });
    let tv = q.total_variation();
    Ok((q, tv))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RegularityKind {
    /// Spectral projection `P_n` onto the first `n` modes.
    Space,
    /// Mollification in time with kernel width `1/n`.
    Time,
}

/// `TV(μ − approximation)`.
pub fn regularity_gap(mu: &VectorMeasure, kind: RegularityKind, n: usize) -> Result<f64> {
    match kind {
        RegularityKind::Space => Ok(project_tail(mu, n.min(mu.dim()))?.1),
        RegularityKind::Time => Ok(mu.sub(&mollify(mu, n)?)?.total_variation()),
    }
}

/// Evaluates `J(x) = ∫_a^x Φ(r) dr` (zero for `x ≤ a`) from precomputed knots.
struct PrimitiveTable {
    knots: Vec<f64>,
    /// `Φ(t_i+)`, the distribution just right of knot `i`.
    phi: Vec<HilbertVector>,
    j: Vec<HilbertVector>,
    rho: Vec<HilbertVector>,
    slope: Vec<HilbertVector>,
    dim: usize,
}

impl PrimitiveTable {
    fn new(mu: &VectorMeasure) -> Self {
        let (a, b) = mu.interval();
        let dim = mu.dim();
        let mut knots: Vec<f64> = mu.atoms().iter().map(|x| x.time).chain(mu.breakpoints()).collect();
        knots.push(a);
        knots.push(b);
        knots.sort_by(f64::total_cmp);
        knots.dedup();
        let m = knots.len();
        let mut phi = Vec::with_capacity(m);
        let mut j = Vec::with_capacity(m);
        let mut rho = Vec::with_capacity(m);
        let mut slope = Vec::with_capacity(m);
        let mut cur_phi = HilbertVector::zeros(dim);
        let mut cur_j = HilbertVector::zeros(dim);
        for i in 0..m {
            let t = knots[i];
            cur_phi.add_assign(&mu.atom_at(t));
            phi.push(cur_phi.clone());
            j.push(cur_j.clone());
            if i + 1 < m {
                let t1 = knots[i + 1];
                let dt = t1 - t;
                let r0 = right_value(mu, t);
                let r1 = left_value(mu, t1);
                let sl = r1.sub(&r0).scale(1.0 / dt);
                // advance J and Φ across [t, t1]
                let mut dj = cur_phi.scale(dt);
                dj.axpy(0.5 * dt * dt, &r0);
                dj.axpy(dt * dt * dt / 6.0, &sl);
                cur_j.add_assign(&dj);
                let mut dphi = r0.scale(dt);
                dphi.axpy(0.5 * dt * dt, &sl);
                cur_phi.add_assign(&dphi);
                rho.push(r0);
                slope.push(sl);
            } else {
                rho.push(HilbertVector::zeros(dim));
                slope.push(HilbertVector::zeros(dim));
            }
        }
        Self { knots, phi, j, rho, slope, dim }
    }

    fn eval(&self, x: f64) -> HilbertVector {
        if x <= self.knots[0] {
            return HilbertVector::zeros(self.dim);
        }
        let i = self.knots.partition_point(|&t| t < x) - 1;
        let d = x - self.knots[i];
        let mut out = self.j[i].clone();
        out.axpy(d, &self.phi[i]);
        out.axpy(0.5 * d * d, &self.rho[i]);
        out.axpy(d * d * d / 6.0, &self.slope[i]);
        out
    }
}

fn right_value(mu: &VectorMeasure, t: f64) -> HilbertVector {
    let d = mu.density();
    if d.is_empty() || t < d[0].time || t >= d[d.len() - 1].time {
        return HilbertVector::zeros(mu.dim());
    }
    mu.density_at(t)
}

fn left_value(mu: &VectorMeasure, t: f64) -> HilbertVector {
    let d = mu.density();
    if d.is_empty() || t <= d[0].time || t > d[d.len() - 1].time {
        return HilbertVector::zeros(mu.dim());
    }
    let idx = d.partition_point(|n| n.time < t);
    if idx < d.len() && d[idx].time == t {
        return d[idx].value.clone();
    }
    mu.density_at(t)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s(x: f64) -> HilbertVector {
        HilbertVector::scalar(x)
    }

    #[test]
    fn delta_keeps_grid_atoms() {
        let mu = VectorMeasure::from_atoms(0.0, 1.0, 1, vec![(0.25, s(1.0)), (0.5, s(-2.0))]).unwrap();
        let d = delta_approximation(&mu, 4).unwrap();
        assert_eq!(d, mu);
    }

    #[test]
    fn delta_of_nonnegative_density_preserves_tv() {
        let mu = VectorMeasure::sampled_density(0.0, 1.0, 1, 50, |t| s(1.0 + t * t)).unwrap();
        for n in [1, 7, 64] {
            let d = delta_approximation(&mu, n).unwrap();
            let (tv, tv_n) = (mu.total_variation(), d.total_variation());
            assert!((tv - tv_n).abs() <= 1e-14 * tv);
        }
    }

    #[test]
    fn delta_distribution_error_within_lipschitz_bound() {
        // density 2t on [0,1] is 2-Lipschitz
        let mu = VectorMeasure::from_density(0.0, 1.0, 1, vec![(0.0, s(0.0)), (1.0, s(2.0))]).unwrap();
        for n in [5, 20] {
            let d = delta_approximation(&mu, n).unwrap();
            let mut sup: f64 = 0.0;
            for i in 0..=2000 {
                let t = i as f64 / 2000.0;
                let e = d.distribution(t).unwrap().sub(&mu.distribution(t).unwrap()).norm();
                sup = sup.max(e);
            }
            assert!(sup <= 2.0 / n as f64 + 1e-14, "n={n} sup={sup}");
        }
    }

    #[test]
    fn mollify_zero_and_delta() {
        let z = VectorMeasure::zero(0.0, 1.0, 3);
        assert!(mollify(&z, 5).unwrap().is_zero());
        let mu = VectorMeasure::from_atoms(0.0, 1.0, 1, vec![(0.5, s(1.0))]).unwrap();
        for n in [4, 16, 64] {
            let m = mollify(&mu, n).unwrap();
            assert!(m.is_absolutely_continuous());
            assert!((m.mass().coeffs()[0] - 1.0).abs() < 1e-12);
            // support shrinks to 0.5 from the right
            assert!(m.density_integral(0.0, 0.5).norm() < 1e-12);
            assert!((m.density_integral(0.5, 0.5 + 1.0 / n as f64).coeffs()[0] - 1.0).abs() < 1e-12);
            // Φ at the jump point keeps the left-continuous value
            assert!(m.distribution(0.5).unwrap().norm() < 1e-12);
            assert!(m.total_variation() <= mu.total_variation() * (1.0 + 1e-13));
        }
    }

    #[test]
    fn mollify_converges_pointwise() {
        let mu = VectorMeasure::new(
            0.0,
            2.0,
            1,
            vec![super::super::Atom { time: 0.7, value: s(-1.0) }],
            vec![Node { time: 0.0, value: s(1.0) }, Node { time: 2.0, value: s(-1.0) }],
        )
        .unwrap();
        for &t in &[0.3, 0.7, 0.71, 1.5] {
            let target = mu.distribution(t).unwrap();
            let errs: Vec<f64> = [8, 32, 128]
                .iter()
                .map(|&n| mollify(&mu, n).unwrap().distribution(t).unwrap().sub(&target).norm())
                .collect();
            assert!(errs[2] < 0.05, "t={t}: {errs:?}");
            assert!(errs[2] <= errs[0] + 1e-12);
        }
    }

    #[test]
    fn project_tail_examples() {
        let e3 = HilbertVector::basis(6, 3);
        let mu = VectorMeasure::from_atoms(0.0, 1.0, 6, vec![(0.2, e3.scale(2.0))]).unwrap();
        let (q, tv) = project_tail(&mu, 5).unwrap();
        assert!(q.is_zero());
        assert_eq!(tv, 0.0);
        assert_eq!(project_tail(&mu, 0).unwrap().1, mu.total_variation());
        assert!(project_tail(&mu, 7).is_err());
    }

    #[test]
    fn space_gap_vanishes_at_rank() {
        let v = HilbertVector::from_vec(vec![1.0, -1.0, 0.5, 0.0, 0.0]);
        let mu = VectorMeasure::from_density(0.0, 1.0, 5, vec![(0.0, v.clone()), (1.0, v)]).unwrap();
        assert!(regularity_gap(&mu, RegularityKind::Space, 2).unwrap() > 0.0);
        assert_eq!(regularity_gap(&mu, RegularityKind::Space, 3).unwrap(), 0.0);
    }
}
