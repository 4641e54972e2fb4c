//! Measures on the whole time line, materialised on demand as finite windows.

use std::f64::consts::FRAC_2_PI;

use super::{Atom, HilbertVector, Node, VectorMeasure};
use crate::{Error, Result};

/// Cancelling bump pairs `amp·(φ_w(t − t_n) − φ_w(t − t_n − w))` at `t_n = spacing · n`
/// with width `w = 1 / (width_scale · n^width_power)`, `n ∈ [first, last]`.
///
/// `φ_w` is the unit-mass hat on `[0, w]`. With `absolute` the second bump enters with
/// a plus sign (the variation measure). With `atoms` each bump is replaced by its
/// limit atom at the left end of its support.
#[derive(Clone, Debug, PartialEq)]
pub struct SpikeTrain {
    pub amplitude: f64,
    pub spacing: f64,
    pub width_scale: f64,
    pub width_power: i32,
    pub first: u64,
    pub last: Option<u64>,
    pub direction: HilbertVector,
    pub absolute: bool,
    pub atoms: bool,
}

impl SpikeTrain {
    /// Scalar train `½ Σ_{n≥2} (φ_{n²}(t−n) − φ_{n²}(t−n−1/n²))`.
    pub fn cancelling_pairs() -> Self {
        Self {
            amplitude: 0.5,
            spacing: 1.0,
            width_scale: 1.0,
            width_power: 2,
            first: 2,
            last: None,
            direction: HilbertVector::scalar(1.0),
            absolute: false,
            atoms: false,
        }
    }

    /// Scalar atom pairs `+½ δ_{Kn} − ½ δ_{Kn + 1/(Kn)}`, `n ≥ 1`.
    pub fn kicks(k: f64) -> Self {
        Self {
            amplitude: 0.5,
            spacing: k,
            width_scale: k,
            width_power: 1,
            first: 1,
            last: None,
            direction: HilbertVector::scalar(1.0),
            absolute: false,
            atoms: true,
        }
    }

    pub fn width(&self, n: u64) -> f64 {
        1.0 / (self.width_scale * (n as f64).powi(self.width_power))
    }

    fn index_range(&self, a: f64, b: f64) -> Option<(u64, u64)> {
        // a pair starting at t_n covers [t_n, t_n + 2w] with 2w ≤ 2/width_scale
        let reach = 2.0 / self.width_scale;
        let lo = ((a - reach) / self.spacing).floor().max(self.first as f64) as u64;
        let mut hi = (b / self.spacing).floor();
        if hi < self.first as f64 {
            return None;
        }
        if let Some(last) = self.last {
            hi = hi.min(last as f64);
        }
        let hi = hi as u64;
        (lo <= hi).then_some((lo, hi))
    }

    fn pieces(&self, a: f64, b: f64) -> (Vec<Atom>, Vec<Node>) {
        let mut atoms = Vec::new();
        let mut nodes = Vec::new();
        let Some((lo, hi)) = self.index_range(a, b) else {
            return (atoms, nodes);
        };
        let second = if self.absolute { 1.0 } else { -1.0 };
        for n in lo..=hi {
            let t0 = self.spacing * n as f64;
            let w = self.width(n);
            if self.atoms {
                atoms.push(Atom { time: t0, value: self.direction.scale(self.amplitude) });
                atoms.push(Atom { time: t0 + w, value: self.direction.scale(second * self.amplitude) });
            } else {
                let peak = 2.0 * self.amplitude / w;
                let zero = HilbertVector::zeros(self.direction.dim());
                nodes.push(Node { time: t0, value: zero.clone() });
                nodes.push(Node { time: t0 + 0.5 * w, value: self.direction.scale(peak) });
                nodes.push(Node { time: t0 + w, value: zero.clone() });
                nodes.push(Node { time: t0 + 1.5 * w, value: self.direction.scale(second * peak) });
                nodes.push(Node { time: t0 + 2.0 * w, value: zero });
            }
        }
        // pairs never overlap for the shipped parameters; merge coincident zero nodes
        nodes.dedup_by(|x, y| x.time == y.time && x.value == y.value);
        (atoms, nodes)
    }

    fn density_value(&self, t: f64) -> HilbertVector {
        if self.atoms {
            return HilbertVector::zeros(self.direction.dim());
        }
        let (atoms, nodes) = self.pieces(t, t);
        debug_assert!(atoms.is_empty());
        let lo = nodes.first().map_or(t, |n| n.time).min(t);
        let hi = nodes.last().map_or(t, |n| n.time).max(t);
        VectorMeasure::new(lo, hi, self.direction.dim(), Vec::new(), nodes)
            .map(|m| m.density_at(t))
            .unwrap_or_else(|_| HilbertVector::zeros(self.direction.dim()))
    }
}

/// Profile `amplitude · (2/π) arctan(t) · direction` (sampled on windows with the
/// given node spacing), optionally plus a spike train.
#[derive(Clone, Debug, PartialEq)]
pub struct AsymptoticProfile {
    pub amplitude: f64,
    pub direction: HilbertVector,
    pub node_spacing: f64,
    pub spikes: Option<SpikeTrain>,
}

impl AsymptoticProfile {
    fn profile(&self, t: f64) -> HilbertVector {
        self.direction.scale(self.amplitude * FRAC_2_PI * t.atan())
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum Family {
    /// Template on `[0, period]` repeated with the given phase: `μ(t) = template(t − phase mod period)`.
    Periodic { period: f64, phase: f64, template: VectorMeasure },
    SpikeTrain(SpikeTrain),
    AsymptoticProfile(AsymptoticProfile),
    /// Sum of finite pieces; windows must lie inside their combined hull.
    ExplicitList(Vec<VectorMeasure>),
}

/// Forcing on the whole line with an accumulated time shift: `(T(s)μ)(t) = μ(t + s)`.
#[derive(Clone, Debug, PartialEq)]
pub struct GlobalMeasure {
    family: Family,
    offset: f64,
    dim: usize,
}

impl GlobalMeasure {
    pub fn periodic(template: VectorMeasure, period: f64, phase: f64) -> Result<Self> {
        let (a, b) = template.interval();
        if !(period > 0.0) || a != 0.0 || b != period {
            return Err(Error::domain("periodic template must live on [0, period]"));
        }
        if template.atoms().iter().any(|x| x.time >= period) {
            return Err(Error::domain("template atoms must lie in [0, period)"));
        }
        let d = template.density();
        if d.len() >= 2 && (d[0].time == d[1].time || d[d.len() - 1].time == d[d.len() - 2].time) {
            return Err(Error::domain("template density may not jump at its ends"));
        }
        let dim = template.dim();
        Ok(Self { family: Family::Periodic { period, phase, template }, offset: 0.0, dim })
    }

    /// Constant density `value`.
    pub fn constant(value: HilbertVector) -> Self {
        let dim = value.dim();
        let template = VectorMeasure::from_density(0.0, 1.0, dim, vec![(0.0, value.clone()), (1.0, value)])
            .expect("constant template");
        Self { family: Family::Periodic { period: 1.0, phase: 0.0, template }, offset: 0.0, dim }
    }

    pub fn zero(dim: usize) -> Self {
        Self {
            family: Family::Periodic { period: 1.0, phase: 0.0, template: VectorMeasure::zero(0.0, 1.0, dim) },
            offset: 0.0,
            dim,
        }
    }

    pub fn spike_train(train: SpikeTrain) -> Self {
        let dim = train.direction.dim();
        Self { family: Family::SpikeTrain(train), offset: 0.0, dim }
    }

    pub fn asymptotic_profile(profile: AsymptoticProfile) -> Result<Self> {
        if !(profile.node_spacing > 0.0) {
            return Err(Error::domain("node spacing must be positive"));
        }
        if let Some(sp) = &profile.spikes {
            if sp.direction.dim() != profile.direction.dim() {
                return Err(Error::GridMismatch("spike direction dimension".into()));
            }
        }
        let dim = profile.direction.dim();
        Ok(Self { family: Family::AsymptoticProfile(profile), offset: 0.0, dim })
    }

    pub fn explicit(pieces: Vec<VectorMeasure>) -> Result<Self> {
        let dim = pieces.first().map(|p| p.dim()).ok_or_else(|| Error::domain("empty explicit list"))?;
        if pieces.iter().any(|p| p.dim() != dim) {
            return Err(Error::GridMismatch("explicit pieces differ in dimension".into()));
        }
        Ok(Self { family: Family::ExplicitList(pieces), offset: 0.0, dim })
    }

    pub fn family(&self) -> &Family {
        &self.family
    }

    pub fn offset(&self) -> f64 {
        self.offset
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// `T(s)μ`.
    pub fn shift(&self, s: f64) -> Self {
        Self { family: self.family.clone(), offset: self.offset + s, dim: self.dim }
    }

    /// Restriction to `[a, b]` (closed).
    pub fn window(&self, a: f64, b: f64) -> Result<VectorMeasure> {
        if !(a <= b) {
            return Err(Error::domain(format!("window [{a}, {b}] is empty")));
        }
        if self.offset == 0.0 {
            return self.base_window(a, b);
        }
        Ok(self.base_window(a + self.offset, b + self.offset)?.offset_times(-self.offset))
    }

    /// Exact density value at `t` for families with an analytic form.
    pub fn density_value(&self, t: f64) -> Result<HilbertVector> {
        let x = t + self.offset;
        match &self.family {
            Family::AsymptoticProfile(p) => {
                let mut v = p.profile(x);
                if let Some(sp) = &p.spikes {
                    v.add_assign(&sp.density_value(x));
                }
                Ok(v)
            }
            Family::SpikeTrain(sp) => Ok(sp.density_value(x)),
            _ => {
                let d = 1e-6 * (1.0 + x.abs());
                Ok(self.base_window(x - d, x + d)?.density_at(x))
            }
        }
    }

    /// Estimate of `sup_t TV(μ|[t, t+1])` over unit windows starting on `starts`.
    pub fn unit_window_tv(&self, starts: &[f64]) -> Result<f64> {
        let mut best: f64 = 0.0;
        for &s in starts {
            best = best.max(self.window(s, s + 1.0)?.total_variation());
        }
        Ok(best)
    }

    fn base_window(&self, a: f64, b: f64) -> Result<VectorMeasure> {
        match &self.family {
            Family::Periodic { period, phase, template } => periodic_window(template, *period, *phase, a, b),
            Family::SpikeTrain(sp) => {
                let (atoms, nodes) = sp.pieces(a, b);
                build_clipped(self.dim, atoms, nodes, a, b)
            }
            Family::AsymptoticProfile(p) => {
                let n = ((b - a) / p.node_spacing).ceil().max(1.0) as usize;
                let mut m = if b > a {
                    VectorMeasure::sampled_density(a, b, self.dim, n, |t| p.profile(t))?
                } else {
                    VectorMeasure::zero(a, b, self.dim)
                };
                if let Some(sp) = &p.spikes {
                    let (atoms, nodes) = sp.pieces(a, b);
                    m = m.add(&build_clipped(self.dim, atoms, nodes, a, b)?)?;
                }
                Ok(m)
            }
            Family::ExplicitList(pieces) => {
                let lo = pieces.iter().map(|p| p.interval().0).fold(f64::INFINITY, f64::min);
                let hi = pieces.iter().map(|p| p.interval().1).fold(f64::NEG_INFINITY, f64::max);
                if a < lo || b > hi {
                    return Err(Error::domain(format!("window [{a}, {b}] outside explicit support [{lo}, {hi}]")));
                }
                let mut acc = VectorMeasure::zero(a, b, self.dim);
                for p in pieces {
                    let (pa, pb) = p.interval();
                    let (s, t) = (a.max(pa), b.min(pb));
                    if s <= t {
                        acc = acc.add(&p.restrict(s, t)?)?;
                    }
                }
                acc.widen(a, b)
            }
        }
    }
}

fn build_clipped(dim: usize, atoms: Vec<Atom>, nodes: Vec<Node>, a: f64, b: f64) -> Result<VectorMeasure> {
    let lo = atoms
        .iter()
        .map(|x| x.time)
        .chain(nodes.iter().map(|n| n.time))
        .fold(a, f64::min);
    let hi = atoms
        .iter()
        .map(|x| x.time)
        .chain(nodes.iter().map(|n| n.time))
        .fold(b, f64::max);
    VectorMeasure::new(lo, hi, dim, atoms, nodes)?.restrict(a, b)
}

fn periodic_window(template: &VectorMeasure, period: f64, phase: f64, a: f64, b: f64) -> Result<VectorMeasure> {
    let k0 = ((a - phase) / period).floor() as i64;
    let k1 = ((b - phase) / period).floor() as i64;
    let mut atoms = Vec::new();
    let mut nodes = Vec::new();
    for k in k0..=k1 {
        let base = phase + k as f64 * period;
        let next = phase + (k + 1) as f64 * period;
        // template endpoints land exactly on the shared period boundary
        let place = |t: f64| if t == period { next } else { base + t };
        atoms.extend(template.atoms().iter().map(|x| Atom { time: place(x.time), value: x.value.clone() }));
        nodes.extend(template.density().iter().map(|n| Node { time: place(n.time), value: n.value.clone() }));
    }
    build_clipped(template.dim(), atoms, nodes, a, b)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s(x: f64) -> HilbertVector {
        HilbertVector::scalar(x)
    }

    fn template() -> VectorMeasure {
        VectorMeasure::new(
            0.0,
            2.0,
            1,
            vec![Atom { time: 0.5, value: s(1.0) }],
            vec![
                Node { time: 0.0, value: s(0.0) },
                Node { time: 1.0, value: s(2.0) },
                Node { time: 2.0, value: s(0.0) },
            ],
        )
        .unwrap()
    }

    #[test]
    fn periodic_window_matches_direct_construction() {
        let g = GlobalMeasure::periodic(template(), 2.0, 0.0).unwrap();
        let w = g.window(1.0, 4.5).unwrap();
        let direct = VectorMeasure::new(
            1.0,
            4.5,
            1,
            vec![Atom { time: 2.5, value: s(1.0) }, Atom { time: 4.5, value: s(1.0) }],
            vec![
                Node { time: 1.0, value: s(2.0) },
                Node { time: 2.0, value: s(0.0) },
                Node { time: 2.0, value: s(0.0) },
                Node { time: 3.0, value: s(2.0) },
                Node { time: 4.0, value: s(0.0) },
                Node { time: 4.0, value: s(0.0) },
                Node { time: 4.5, value: s(1.0) },
            ],
        )
        .unwrap();
        assert_eq!(w, direct);
    }

    #[test]
    fn shift_then_window_is_window_of_shifted_interval() {
        let g = GlobalMeasure::periodic(template(), 2.0, 0.3).unwrap();
        assert_eq!(g.shift(0.0).window(0.0, 3.0).unwrap(), g.window(0.0, 3.0).unwrap());
        let sh = g.shift(0.75);
        let lhs = sh.window(-1.0, 2.0).unwrap();
        let rhs = g.window(-0.25, 2.75).unwrap().offset_times(-0.75);
        assert_eq!(lhs, rhs);
        let twice = g.shift(0.25).shift(0.5);
        let a = twice.window(0.0, 3.0).unwrap();
        let b = sh.window(0.0, 3.0).unwrap();
        assert_eq!(a.atoms().len(), b.atoms().len());
        for (x, y) in a.atoms().iter().zip(b.atoms()) {
            assert!((x.time - y.time).abs() < 1e-14);
        }
        assert!((a.total_variation() - b.total_variation()).abs() < 1e-13);
    }

    #[test]
    fn explicit_list_rejects_outside_windows() {
        let p = VectorMeasure::from_atoms(0.0, 1.0, 1, vec![(0.5, s(1.0))]).unwrap();
        let g = GlobalMeasure::explicit(vec![p]).unwrap();
        assert!(g.window(0.5, 1.5).is_err());
        assert_eq!(g.window(0.25, 0.75).unwrap().mass(), s(1.0));
    }

    #[test]
    fn spike_pairs_cancel_and_variation_adds() {
        let g = GlobalMeasure::spike_train(SpikeTrain::cancelling_pairs());
        let w = g.window(0.0, 10.0).unwrap();
        assert!(w.mass().norm() < 1e-12);
        assert!((w.total_variation() - 8.0).abs() < 1e-12);
        let mut abs = SpikeTrain::cancelling_pairs();
        abs.absolute = true;
        let w = GlobalMeasure::spike_train(abs).window(0.0, 10.0).unwrap();
        assert!((w.mass().coeffs()[0] - 8.0).abs() < 1e-12);
    }

    #[test]
    fn asymptotic_profile_density_and_kicks() {
        let g = GlobalMeasure::asymptotic_profile(AsymptoticProfile {
            amplitude: 3.0,
            direction: s(1.0),
            node_spacing: 0.01,
            spikes: Some(SpikeTrain::kicks(50.0)),
        })
        .unwrap();
        let v = g.density_value(1.0).unwrap().coeffs()[0];
        assert!((v - 1.5).abs() < 1e-14);
        let w = g.window(40.0, 60.0).unwrap();
        assert_eq!(w.atoms().len(), 2);
        assert_eq!(w.atoms()[0].time, 50.0);
        assert_eq!(w.atoms()[1].time, 50.0 + 1.0 / 50.0);
    }
}
