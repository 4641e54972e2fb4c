use serde::{Deserialize, Serialize};

use super::HilbertVector;
use crate::numerics::{adaptive_simpson, gl8};
use crate::{Error, Result};

/// Point mass `value · δ_time`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Atom {
    pub time: f64,
    pub value: HilbertVector,
}

/// Breakpoint of the piecewise-linear density. Two consecutive nodes with the same
/// time encode a jump (left value, then right value).
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Node {
    pub time: f64,
    pub value: HilbertVector,
}

/// Finite-window Hilbert-valued measure: sorted atoms plus a piecewise-linear density.
///
/// The density vanishes outside `[first node, last node]`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VectorMeasure {
    a: f64,
    b: f64,
    dim: usize,
    atoms: Vec<Atom>,
    density: Vec<Node>,
}

/// One linear piece of the density on `[t0, t1]`, `t1 > t0`.
#[derive(Clone, Copy, Debug)]
pub struct Segment<'a> {
    pub t0: f64,
    pub t1: f64,
    pub v0: &'a HilbertVector,
    pub v1: &'a HilbertVector,
}

impl Segment<'_> {
    pub fn at(&self, t: f64) -> HilbertVector {
        HilbertVector::lerp(self.v0, self.v1, (t - self.t0) / (self.t1 - self.t0))
    }

    /// Exact integral of the piece over `[s, t] ∩ [t0, t1]`.
    pub fn integral(&self, s: f64, t: f64) -> Option<HilbertVector> {
        let lo = s.max(self.t0);
        let hi = t.min(self.t1);
        if hi <= lo {
            return None;
        }
        let mut acc = self.at(lo);
        acc.add_assign(&self.at(hi));
        Some(acc.scale(0.5 * (hi - lo)))
    }
}

impl VectorMeasure {
    /// Validates and normalises: atoms are sorted and coincident atoms summed.
    pub fn new(a: f64, b: f64, dim: usize, atoms: Vec<Atom>, density: Vec<Node>) -> Result<Self> {
        if !(a.is_finite() && b.is_finite() && a <= b) {
            return Err(Error::domain(format!("invalid interval [{a}, {b}]")));
        }
        let mut atoms = atoms;
        for at in &atoms {
            if at.value.dim() != dim {
                return Err(Error::GridMismatch(format!(
                    "atom of dimension {} in a measure of dimension {dim}",
                    at.value.dim()
                )));
            }
            if !(at.time >= a && at.time <= b) || !at.value.is_finite() {
                return Err(Error::domain(format!("atom at {} outside [{a}, {b}] or non-finite", at.time)));
            }
        }
        atoms.sort_by(|x, y| x.time.total_cmp(&y.time));
        let mut merged: Vec<Atom> = Vec::with_capacity(atoms.len());
        for at in atoms {
            match merged.last_mut() {
                Some(last) if last.time == at.time => last.value.add_assign(&at.value),
                _ => merged.push(at),
            }
        }
        for (i, nd) in density.iter().enumerate() {
            if nd.value.dim() != dim {
                return Err(Error::GridMismatch(format!(
                    "density node of dimension {} in a measure of dimension {dim}",
                    nd.value.dim()
                )));
            }
            if !(nd.time >= a && nd.time <= b) || !nd.value.is_finite() {
                return Err(Error::domain(format!("density node at {} outside [{a}, {b}]", nd.time)));
            }
            if i > 0 && nd.time < density[i - 1].time {
                return Err(Error::domain("density nodes must be nondecreasing in time"));
            }
            if i > 1 && nd.time == density[i - 2].time {
                return Err(Error::domain("at most two density nodes may share a time"));
            }
        }
        Ok(Self { a, b, dim, atoms: merged, density })
    }

    pub fn zero(a: f64, b: f64, dim: usize) -> Self {
        Self { a, b, dim, atoms: Vec::new(), density: Vec::new() }
    }

    pub fn from_atoms(a: f64, b: f64, dim: usize, atoms: Vec<(f64, HilbertVector)>) -> Result<Self> {
        let atoms = atoms.into_iter().map(|(time, value)| Atom { time, value }).collect();
        Self::new(a, b, dim, atoms, Vec::new())
    }

    pub fn from_density(a: f64, b: f64, dim: usize, nodes: Vec<(f64, HilbertVector)>) -> Result<Self> {
        let nodes = nodes.into_iter().map(|(time, value)| Node { time, value }).collect();
        Self::new(a, b, dim, Vec::new(), nodes)
    }

    /// Samples `rho` at `n + 1` uniform nodes on `[a, b]`.
    pub fn sampled_density(
        a: f64,
        b: f64,
        dim: usize,
        n: usize,
        rho: impl Fn(f64) -> HilbertVector,
    ) -> Result<Self> {
        let nodes = (0..=n)
            .map(|i| {
                let t = if i == n { b } else { a + (b - a) * i as f64 / n as f64 };
                (t, rho(t))
            })
            .collect();
        Self::from_density(a, b, dim, nodes)
    }

    pub fn interval(&self) -> (f64, f64) {
        (self.a, self.b)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn atoms(&self) -> &[Atom] {
        &self.atoms
    }

    pub fn density(&self) -> &[Node] {
        &self.density
    }

    pub fn is_atomic(&self) -> bool {
        self.density.iter().all(|n| n.value.is_zero())
    }

    pub fn is_absolutely_continuous(&self) -> bool {
        self.atoms.iter().all(|a| a.value.is_zero())
    }

    pub fn is_zero(&self) -> bool {
        self.is_atomic() && self.is_absolutely_continuous()
    }

    pub fn segments(&self) -> impl Iterator<Item = Segment<'_>> {
        self.density.windows(2).filter(|w| w[1].time > w[0].time).map(|w| Segment {
            t0: w[0].time,
            t1: w[1].time,
            v0: &w[0].value,
            v1: &w[1].value,
        })
    }

    /// Density breakpoint times (deduplicated).
    pub fn breakpoints(&self) -> Vec<f64> {
        let mut ts: Vec<f64> = self.density.iter().map(|n| n.time).collect();
        ts.dedup();
        ts
    }

    /// Density value at `t`; at a jump the right value is returned.
    pub fn density_at(&self, t: f64) -> HilbertVector {
        let d = &self.density;
        if d.is_empty() || t < d[0].time || t > d[d.len() - 1].time {
            return HilbertVector::zeros(self.dim);
        }
        let idx = d.partition_point(|n| n.time <= t);
        if idx == d.len() {
            return d[d.len() - 1].value.clone();
        }
        if idx == 0 {
            return d[0].value.clone();
        }
        let (n0, n1) = (&d[idx - 1], &d[idx]);
        if n1.time == n0.time {
            return n1.value.clone();
        }
        HilbertVector::lerp(&n0.value, &n1.value, (t - n0.time) / (n1.time - n0.time))
    }

    /// Atom value at exactly `t` (zero if none).
    pub fn atom_at(&self, t: f64) -> HilbertVector {
        match self.atoms.binary_search_by(|a| a.time.total_cmp(&t)) {
            Ok(i) => self.atoms[i].value.clone(),
            Err(_) => HilbertVector::zeros(self.dim),
        }
    }

    /// `∫_s^t ρ` by exact trapezoid on the clipped pieces.
    pub fn density_integral(&self, s: f64, t: f64) -> HilbertVector {
        let mut acc = HilbertVector::zeros(self.dim);
        for seg in self.segments() {
            if seg.t1 <= s {
                continue;
            }
            if seg.t0 >= t {
                break;
            }
            if let Some(v) = seg.integral(s, t) {
                acc.add_assign(&v);
            }
        }
        acc
    }

    /// `∫_s^t ‖ρ‖`.
    pub fn density_variation(&self, s: f64, t: f64) -> f64 {
        let mut acc = 0.0;
        for seg in self.segments() {
            let lo = s.max(seg.t0);
            let hi = t.min(seg.t1);
            if hi > lo {
                acc += linear_norm_integral(&seg.at(lo), &seg.at(hi), hi - lo);
            }
        }
        acc
    }

    pub fn total_variation(&self) -> f64 {
        self.atoms.iter().map(|a| a.value.norm()).sum::<f64>() + self.density_variation(self.a, self.b)
    }

    /// Left-continuous distribution function `Φ(t) = μ([a, t))`, with `Φ(b) = μ([a, b])`.
    pub fn distribution(&self, t: f64) -> Result<HilbertVector> {
        if !(t >= self.a && t <= self.b) {
            return Err(Error::domain(format!("t = {t} outside [{}, {}]", self.a, self.b)));
        }
        let mut acc = self.density_integral(self.a, t);
        for at in &self.atoms {
            if at.time < t || (t == self.b && at.time == t) {
                acc.add_assign(&at.value);
            }
        }
        Ok(acc)
    }

    /// Measure of the interval between `s` and `t` with the given bracket types.
    pub fn interval_value(&self, s: f64, t: f64, left_closed: bool, right_closed: bool) -> Result<HilbertVector> {
        if s > t {
            return Err(Error::domain(format!("interval start {s} exceeds end {t}")));
        }
        if s < self.a || t > self.b {
            return Err(Error::domain(format!("[{s}, {t}] not inside [{}, {}]", self.a, self.b)));
        }
        let mut acc = self.density_integral(s, t);
        for at in &self.atoms {
            let after = at.time > s || (left_closed && at.time == s);
            let before = at.time < t || (right_closed && at.time == t);
            if after && before {
                acc.add_assign(&at.value);
            }
        }
        Ok(acc)
    }

    /// `μ([a, b])`.
    pub fn mass(&self) -> HilbertVector {
        self.interval_value(self.a, self.b, true, true).expect("whole interval")
    }

    /// `∫ (f(t), μ(dt))`: exact on atoms, 8-point Gauss–Legendre on density pieces.
    pub fn integrate_against(&self, f: &dyn Fn(f64) -> HilbertVector) -> f64 {
        let mut acc: f64 = self.atoms.iter().map(|at| f(at.time).dot(&at.value)).sum();
        let (x, w) = gl8();
        let max_piece = ((self.b - self.a) / 64.0).max(f64::MIN_POSITIVE);
        for seg in self.segments() {
            let pieces = ((seg.t1 - seg.t0) / max_piece).ceil().max(1.0) as usize;
            let h = (seg.t1 - seg.t0) / pieces as f64;
            for p in 0..pieces {
                let lo = seg.t0 + p as f64 * h;
                for (xi, wi) in x.iter().zip(w) {
                    let t = lo + 0.5 * h * (xi + 1.0);
                    acc += 0.5 * h * wi * f(t).dot(&seg.at(t));
                }
            }
        }
        acc
    }

    /// Restriction to the closed window `[s, t]`.
    pub fn restrict(&self, s: f64, t: f64) -> Result<Self> {
        if s > t || s < self.a || t > self.b {
            return Err(Error::domain(format!("cannot restrict [{}, {}] to [{s}, {t}]", self.a, self.b)));
        }
        let atoms = self.atoms.iter().filter(|a| a.time >= s && a.time <= t).cloned().collect();
        Ok(Self { a: s, b: t, dim: self.dim, atoms, density: clip_nodes(self, s, t) })
    }

    /// Same measure with every time moved by `delta` (interval included).
    pub fn offset_times(&self, delta: f64) -> Self {
        Self {
            a: self.a + delta,
            b: self.b + delta,
            dim: self.dim,
            atoms: self.atoms.iter().map(|a| Atom { time: a.time + delta, value: a.value.clone() }).collect(),
            density: self.density.iter().map(|n| Node { time: n.time + delta, value: n.value.clone() }).collect(),
        }
    }

    /// Applies a linear map to every atom and density node.
    pub fn map_values(&self, f: impl Fn(&HilbertVector) -> HilbertVector) -> Self {
        let atoms: Vec<Atom> = self.atoms.iter().map(|a| Atom { time: a.time, value: f(&a.value) }).collect();
        let density: Vec<Node> = self.density.iter().map(|n| Node { time: n.time, value: f(&n.value) }).collect();
        let dim = atoms
            .first()
            .map(|a| a.value.dim())
            .or_else(|| density.first().map(|n| n.value.dim()))
            .unwrap_or(self.dim);
        Self { a: self.a, b: self.b, dim, atoms, density }
    }

    pub fn scale(&self, c: f64) -> Self {
        self.map_values(|v| v.scale(c))
    }

    /// Sum on the union of the two intervals.
    pub fn add(&self, other: &Self) -> Result<Self> {
        if self.dim != other.dim {
            return Err(Error::GridMismatch(format!("measure dimensions {} and {}", self.dim, other.dim)));
        }
        let a = self.a.min(other.a);
        let b = self.b.max(other.b);
        let mut atoms = self.atoms.clone();
        atoms.extend(other.atoms.iter().cloned());
        let density = add_densities(self, other);
        Self::new(a, b, self.dim, atoms, density)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.scale(-1.0))
    }

    /// Replaces the window by `[a, b] ⊇` the current one.
    pub fn widen(&self, a: f64, b: f64) -> Result<Self> {
        Self::new(a.min(self.a), b.max(self.b), self.dim, self.atoms.clone(), self.density.clone())
    }
}

/// `∫_0^len ‖v0 + (v1 - v0) s/len‖ ds`; exact when the endpoint values are collinear.
pub(crate) fn linear_norm_integral(v0: &HilbertVector, v1: &HilbertVector, len: f64) -> f64 {
    let n0 = v0.norm();
    let n1 = v1.norm();
    if n0 == 0.0 || n1 == 0.0 {
        return 0.5 * len * (n0 + n1);
    }
    let cos = v0.dot(v1) / (n0 * n1);
    if cos >= 1.0 - 1e-15 {
        return 0.5 * len * (n0 + n1);
    }
    if cos <= -1.0 + 1e-15 {
        return 0.5 * len * (n0 * n0 + n1 * n1) / (n0 + n1);
    }
    // ‖v0 + θ d‖² = n0² + 2θ (v0·d) + θ²‖d‖², smooth and bounded away from zero here.
    let d = v1.sub(v0);
    let (c0, c1, c2) = (n0 * n0, 2.0 * v0.dot(&d), d.dot(&d));
    let f = |th: f64| (c0 + th * (c1 + th * c2)).max(0.0).sqrt();
    len * adaptive_simpson(&f, 0.0, 1.0, 1e-15 * (n0 + n1))
}

fn clip_nodes(m: &VectorMeasure, s: f64, t: f64) -> Vec<Node> {
    let d = &m.density;
    if d.is_empty() {
        return Vec::new();
    }
    let first = d[0].time.max(s);
    let last = d[d.len() - 1].time.min(t);
    if last <= first {
        return Vec::new();
    }
    let mut out = vec![Node { time: first, value: m.density_at(first) }];
    out.extend(d.iter().filter(|n| n.time > first && n.time < last).cloned());
    out.push(Node { time: last, value: value_left(m, last) });
    out
}

/// Density value just left of `t` (left value at jumps).
fn value_left(m: &VectorMeasure, t: f64) -> HilbertVector {
    let d = &m.density;
    let idx = d.partition_point(|n| n.time < t);
    if idx < d.len() && d[idx].time == t {
        return d[idx].value.clone();
    }
    m.density_at(t)
}

/// Limit of the density from the left (zero left of the support).
fn left_limit(m: &VectorMeasure, t: f64) -> HilbertVector {
    let d = &m.density;
    if d.is_empty() || t <= d[0].time || t > d[d.len() - 1].time {
        return HilbertVector::zeros(m.dim);
    }
    value_left(m, t)
}

/// Limit of the density from the right (zero right of the support).
fn right_limit(m: &VectorMeasure, t: f64) -> HilbertVector {
    let d = &m.density;
    if d.is_empty() || t < d[0].time || t >= d[d.len() - 1].time {
        return HilbertVector::zeros(m.dim);
    }
    m.density_at(t)
}

fn add_densities(p: &VectorMeasure, q: &VectorMeasure) -> Vec<Node> {
    if q.density.is_empty() {
        return p.density.clone();
    }
    if p.density.is_empty() {
        return q.density.clone();
    }
    let mut times: Vec<f64> = p.density.iter().chain(q.density.iter()).map(|n| n.time).collect();
    times.sort_by(f64::total_cmp);
    times.dedup();
    let n = times.len();
    let mut out = Vec::with_capacity(2 * n);
    for (i, &t) in times.iter().enumerate() {
        let left = left_limit(p, t).add(&left_limit(q, t));
        let right = right_limit(p, t).add(&right_limit(q, t));
        if i == 0 {
            out.push(Node { time: t, value: right });
        } else if i == n - 1 || left == right {
            out.push(Node { time: t, value: left });
        } else {
            out.push(Node { time: t, value: left });
            out.push(Node { time: t, value: right });
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s(x: f64) -> HilbertVector {
        HilbertVector::scalar(x)
    }

    #[test]
    fn total_variation_examples() {
        let m = VectorMeasure::from_atoms(0.0, 1.0, 1, vec![(0.5, s(2.0))]).unwrap();
        assert_eq!(m.total_variation(), 2.0);
        let m = VectorMeasure::from_atoms(0.0, 1.0, 1, vec![(0.3, s(1.0)), (0.7, s(-1.0))]).unwrap();
        assert_eq!(m.total_variation(), 2.0);
        let pi = std::f64::consts::PI;
        let m = VectorMeasure::sampled_density(0.0, pi, 1, 20000, |t| s(t.sin())).unwrap();
        // Riemann-sum oracle of ∫|sin|
        let n = 2_000_000;
        let h = pi / n as f64;
        let oracle: f64 = (0..n).map(|i| ((i as f64 + 0.5) * h).sin().abs() * h).sum();
        assert!((m.total_variation() - oracle).abs() < 1e-8);
        assert!((oracle - 2.0).abs() < 1e-10);
    }

    #[test]
    fn coincident_atoms_merge() {
        let m = VectorMeasure::from_atoms(0.0, 1.0, 1, vec![(0.5, s(1.0)), (0.2, s(1.0)), (0.5, s(2.0))]).unwrap();
        assert_eq!(m.atoms().len(), 2);
        assert_eq!(m.atoms()[1].value, s(3.0));
        assert_eq!(m.atoms()[0].time, 0.2);
    }

    #[test]
    fn distribution_examples() {
        let h = HilbertVector::from_vec(vec![1.0, -2.0]);
        let m = VectorMeasure::from_atoms(0.0, 1.0, 2, vec![(0.5, h.clone())]).unwrap();
        assert!(m.distribution(0.5).unwrap().is_zero());
        assert_eq!(m.distribution(0.6).unwrap(), h);
        assert!(m.distribution(1.5).is_err());
        let c = VectorMeasure::from_density(0.0, 1.0, 1, vec![(0.0, s(3.0)), (1.0, s(3.0))]).unwrap();
        assert!((c.distribution(0.4).unwrap().coeffs()[0] - 1.2).abs() < 1e-15);
        let end = VectorMeasure::from_atoms(0.0, 1.0, 1, vec![(1.0, s(1.0))]).unwrap();
        assert_eq!(end.distribution(1.0).unwrap(), s(1.0));
    }

    #[test]
    fn interval_value_brackets() {
        let h = s(2.0);
        let m = VectorMeasure::from_atoms(0.0, 1.0, 1, vec![(0.5, h.clone())]).unwrap();
        assert_eq!(m.interval_value(0.5, 0.5, true, true).unwrap(), h);
        assert!(m.interval_value(0.5, 1.0, false, true).unwrap().is_zero());
        assert!(m.interval_value(0.5, 0.5, true, false).unwrap().is_zero());
        assert!(m.interval_value(0.7, 0.5, true, true).is_err());
    }

    #[test]
    fn integrate_against_examples() {
        let m = VectorMeasure::from_atoms(0.0, 1.0, 1, vec![(0.5, s(1.0))]).unwrap();
        assert_eq!(m.integrate_against(&|t| s(t)), 0.5);
        let psi = HilbertVector::from_vec(vec![0.3, -1.1]);
        let mut atoms = vec![(0.25, HilbertVector::from_vec(vec![1.0, 2.0]))];
        atoms.push((0.9, HilbertVector::from_vec(vec![-0.5, 0.1])));
        let m = VectorMeasure::new(
            0.0,
            1.0,
            2,
            atoms.into_iter().map(|(time, value)| Atom { time, value }).collect(),
            vec![
                Node { time: 0.1, value: HilbertVector::from_vec(vec![1.0, 0.0]) },
                Node { time: 0.6, value: HilbertVector::from_vec(vec![-2.0, 3.0]) },
            ],
        )
        .unwrap();
        let lhs = m.integrate_against(&|_| psi.clone());
        assert!((lhs - psi.dot(&m.mass())).abs() < 1e-14);
    }

    #[test]
    fn add_handles_adjacent_supports() {
        let p = VectorMeasure::from_density(0.0, 2.0, 1, vec![(0.0, s(1.0)), (1.0, s(1.0))]).unwrap();
        let q = VectorMeasure::from_density(0.0, 2.0, 1, vec![(1.0, s(3.0)), (2.0, s(3.0))]).unwrap();
        let r = p.add(&q).unwrap();
        assert!((r.mass().coeffs()[0] - 4.0).abs() < 1e-15);
        assert!((r.total_variation() - 4.0).abs() < 1e-15);
        assert_eq!(r.density_at(0.5), s(1.0));
        assert_eq!(r.density_at(1.5), s(3.0));
        let z = r.sub(&r).unwrap();
        assert!(z.total_variation() < 1e-15);
    }

    #[test]
    fn restrict_keeps_endpoint_atoms_and_clips_density() {
        let m = VectorMeasure::new(
            0.0,
            1.0,
            1,
            vec![Atom { time: 0.25, value: s(1.0) }, Atom { time: 0.75, value: s(1.0) }],
            vec![Node { time: 0.0, value: s(0.0) }, Node { time: 1.0, value: s(2.0) }],
        )
        .unwrap();
        let r = m.restrict(0.25, 0.5).unwrap();
        assert_eq!(r.atoms().len(), 1);
        let expect = 0.25 * 0.5 * (0.5 + 1.0);
        assert!((r.density_integral(0.25, 0.5).coeffs()[0] - expect).abs() < 1e-15);
        assert!((r.mass().coeffs()[0] - (1.0 + expect)).abs() < 1e-15);
    }

    #[test]
    fn non_collinear_variation_matches_fine_quadrature() {
        let v0 = HilbertVector::from_vec(vec![1.0, 0.0]);
        let v1 = HilbertVector::from_vec(vec![0.0, 2.0]);
        let got = linear_norm_integral(&v0, &v1, 1.0);
        let n = 200_000;
        let oracle: f64 = (0..n)
            .map(|i| {
                let th = (i as f64 + 0.5) / n as f64;
                HilbertVector::lerp(&v0, &v1, th).norm() / n as f64
            })
            .sum();
        assert!((got - oracle).abs() < 1e-10);
        // antiparallel case crosses zero
        let got = linear_norm_integral(&s(1.0), &s(-3.0), 1.0);
        assert!((got - (1.0 + 9.0) / 8.0).abs() < 1e-15);
    }
}
