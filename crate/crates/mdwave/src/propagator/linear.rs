use std::sync::Arc;

use num_complex::Complex64;
use rayon::prelude::*;

use super::block::{block, delta_star, Block};
use crate::measure::{HilbertVector, VectorMeasure};
use crate::numerics::gl8;
use crate::spectral::{Grid, SpectralField, StatePair};
use crate::{Error, Result};

const PARALLEL_SLOTS: usize = 4096;

/// Forcing measure converted once into spectral fields.
#[derive(Clone, Debug)]
pub struct ForcingTrack {
    a: f64,
    b: f64,
    atoms: Vec<(f64, SpectralField)>,
    pieces: Vec<Piece>,
}

#[derive(Clone, Debug)]
struct Piece {
    t0: f64,
    t1: f64,
    r0: SpectralField,
    r1: SpectralField,
}

impl Piece {
    fn at(&self, t: f64) -> SpectralField {
        let th = (t - self.t0) / (self.t1 - self.t0);
        let mut out = self.r0.scale(1.0 - th);
        out.axpy(th, &self.r1);
        out
    }
}

impl ForcingTrack {
    pub fn new(grid: &Grid, mu: &VectorMeasure) -> Result<Self> {
        if mu.dim() != grid.hilbert_dim() {
            return Err(Error::GridMismatch(format!(
                "measure of dimension {} on a grid with {} modes",
                mu.dim(),
                grid.hilbert_dim()
            )));
        }
        let (a, b) = mu.interval();
        let atoms = mu
            .atoms()
            .iter()
            .map(|at| Ok((at.time, SpectralField::from_hilbert(grid, &at.value)?)))
            .collect::<Result<Vec<_>>>()?;
        let pieces = mu
            .segments()
            .map(|s| {
                Ok(Piece {
                    t0: s.t0,
                    t1: s.t1,
                    r0: SpectralField::from_hilbert(grid, s.v0)?,
                    r1: SpectralField::from_hilbert(grid, s.v1)?,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Self { a, b, atoms, pieces })
    }

    pub fn zero(a: f64, b: f64) -> Self {
        Self { a, b, atoms: Vec::new(), pieces: Vec::new() }
    }

    pub fn interval(&self) -> (f64, f64) {
        (self.a, self.b)
    }

    pub fn atom_times(&self) -> impl Iterator<Item = f64> + '_ {
        self.atoms.iter().map(|(t, _)| *t)
    }

    /// Atoms with `s ≤ time < t`.
    pub fn atoms_in(&self, s: f64, t: f64) -> impl Iterator<Item = &(f64, SpectralField)> {
        let lo = self.atoms.partition_point(|(x, _)| *x < s);
        let hi = self.atoms.partition_point(|(x, _)| *x < t);
        self.atoms[lo..hi].iter()
    }

    pub fn atom_at(&self, t: f64) -> Option<&SpectralField> {
        self.atoms.iter().find(|(x, _)| *x == t).map(|(_, h)| h)
    }

    pub fn has_density_in(&self, s: f64, t: f64) -> bool {
        self.pieces.iter().any(|p| p.t1 > s && p.t0 < t)
    }

    /// Density value at `t` (right value at jumps, zero outside the support).
    pub fn density_at(&self, t: f64) -> Option<SpectralField> {
        let i = self.pieces.iter().rposition(|p| p.t0 <= t && t <= p.t1)?;
        Some(self.pieces[i].at(t))
    }

    /// Breakpoints of the density (piece ends).
    pub fn breakpoints(&self) -> Vec<f64> {
        let mut v: Vec<f64> = self.pieces.iter().flat_map(|p| [p.t0, p.t1]).collect();
        v.dedup();
        v
    }

    pub(crate) fn pieces_in(&self, s: f64, t: f64) -> Vec<(f64, f64, SpectralField, SpectralField)> {
        self.pieces
            .iter()
            .filter(|p| p.t1 > s && p.t0 < t)
            .map(|p| {
                let (p0, p1) = (p.t0.max(s), p.t1.min(t));
                (p0, p1, p.at(p0), p.at(p1))
            })
            .filter(|(p0, p1, _, _)| p1 > p0)
            .collect()
    }
}

/// Exact solution operator of the damped linear wave equation, one 2×2 block per `λ_k`.
#[derive(Clone, Debug)]
pub struct LinearPropagator {
    gamma: f64,
    grid: Grid,
    class_of: Vec<usize>,
    class_lambda: Vec<f64>,
}

impl LinearPropagator {
    pub fn new(grid: &Grid, gamma: f64) -> Result<Self> {
        if !(gamma >= 0.0) || !gamma.is_finite() {
            return Err(Error::Config(format!("damping must be finite and >= 0, got {gamma}")));
        }
        let mut k2s: Vec<i64> = (0..grid.slots())
            .filter(|&s| grid.is_active(s))
            .map(|s| grid.wave(s).iter().map(|c| c * c).sum())
            .collect();
        k2s.sort_unstable();
        k2s.dedup();
        let class_of = (0..grid.slots())
            .map(|s| {
                if grid.is_active(s) {
                    let k2: i64 = grid.wave(s).iter().map(|c| c * c).sum();
                    k2s.binary_search(&k2).expect("listed")
                } else {
                    usize::MAX
                }
            })
            .collect();
        let class_lambda = k2s.iter().map(|&k2| 1.0 + k2 as f64).collect();
        Ok(Self { gamma, grid: Arc::clone(grid), class_of, class_lambda })
    }

    pub fn gamma(&self) -> f64 {
        self.gamma
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    /// Distinct eigenvalues `1 + |k|²` of the retained modes, ascending.
    pub fn eigenvalues(&self) -> &[f64] {
        &self.class_lambda
    }

    pub fn delta_star(&self) -> f64 {
        delta_star(self.gamma)
    }

    fn blocks(&self, t: f64) -> Vec<Block> {
        self.class_lambda.iter().map(|&l| block(l, self.gamma, t)).collect()
    }

    fn check(&self, xi: &StatePair) -> Result<()> {
        if **xi.grid() != *self.grid {
            return Err(Error::GridMismatch(format!("state on {:?}, propagator on {:?}", xi.grid(), self.grid)));
        }
        Ok(())
    }

    /// `u ← B₀₀u + B₀₁v`, `v ← B₁₀u + B₁₁v` with per-class coefficients.
    fn apply(&self, coef: &[Block], xi: &mut StatePair) {
        let mut u = std::mem::replace(&mut xi.u, SpectralField::zeros(&self.grid));
        let mut v = std::mem::replace(&mut xi.v, SpectralField::zeros(&self.grid));
        let op = |(c, (a, b)): (&usize, (&mut Complex64, &mut Complex64))| {
            if *c == usize::MAX {
                return;
            }
            let m = &coef[*c];
            let (x, y) = (*a, *b);
            *a = x * m[0][0] + y * m[0][1];
            *b = x * m[1][0] + y * m[1][1];
        };
        {
            let (uc, vc) = (u.coeffs_mut(), v.coeffs_mut());
            if uc.len() >= PARALLEL_SLOTS {
                self.class_of.par_iter().zip(uc.par_iter_mut().zip(vc.par_iter_mut())).for_each(op);
            } else {
                self.class_of.iter().zip(uc.iter_mut().zip(vc.iter_mut())).for_each(op);
            }
        }
        xi.u = u;
        xi.v = v;
    }

    /// Adds `cu[c]·h` to `u` and `cv[c]·h` to `v` slotwise.
    fn add_forced(&self, xi: &mut StatePair, cu: &[f64], cv: &[f64], h: &SpectralField) {
        let hc = h.coeffs();
        for (s, &c) in self.class_of.iter().enumerate() {
            if c == usize::MAX || hc[s] == Complex64::new(0.0, 0.0) {
                continue;
            }
            xi.u.coeffs_mut()[s] += hc[s] * cu[c];
            xi.v.coeffs_mut()[s] += hc[s] * cv[c];
        }
    }

    pub fn propagate_homogeneous(&self, xi: &StatePair, t: f64) -> Result<StatePair> {
        self.check(xi)?;
        if !(t >= 0.0) {
            return Err(Error::domain(format!("propagation time must be >= 0, got {t}")));
        }
        let mut out = xi.clone();
        if t > 0.0 {
            self.apply(&self.blocks(t), &mut out);
        }
        Ok(out)
    }

    /// Left limit at `b` of the solution driven by `μ` on `[a, b]` from `ξ` at `a`.
    pub fn duhamel(&self, xi: &StatePair, mu: &VectorMeasure) -> Result<StatePair> {
        let track = ForcingTrack::new(&self.grid, mu)?;
        let (a, b) = mu.interval();
        self.duhamel_track(xi, &track, a, b)
    }

    /// Left limit at `t` from `ξ` at `s`; atoms in `[s, t)` and the density on `[s, t]` act.
    pub fn duhamel_track(&self, xi: &StatePair, track: &ForcingTrack, s: f64, t: f64) -> Result<StatePair> {
        let mut out = self.duhamel_density(xi, track, s, t)?;
        for (ta, h) in track.atoms_in(s, t) {
            let bl = self.blocks(t - ta);
            let cu: Vec<f64> = bl.iter().map(|m| m[0][1]).collect();
            let cv: Vec<f64> = bl.iter().map(|m| m[1][1]).collect();
            self.add_forced(&mut out, &cu, &cv, h);
        }
        Ok(out)
    }

    /// As [`Self::duhamel_track`] with the atoms ignored.
    pub fn duhamel_density(&self, xi: &StatePair, track: &ForcingTrack, s: f64, t: f64) -> Result<StatePair> {
        if !(t >= s) {
            return Err(Error::domain(format!("duhamel needs s <= t, got [{s}, {t}]")));
        }
        let mut out = self.propagate_homogeneous(xi, t - s)?;
        for (p0, p1, q0, q1) in track.pieces_in(s, t) {
            let (w0u, w1u, w0v, w1v) = self.density_weights(p0, p1, t);
            self.add_forced(&mut out, &w0u, &w0v, &q0);
            self.add_forced(&mut out, &w1u, &w1v, &q1);
        }
        Ok(out)
    }

    /// Per-class weights `∫_{p0}^{p1} S(t−r)₀₁,₁₁ (1−θ), θ dr` for a linear density on `[p0, p1]`.
    fn density_weights(&self, p0: f64, p1: f64, t: f64) -> (Vec<f64>, Vec<f64>, Vec<f64>, Vec<f64>) {
        let (x, w) = gl8();
        let n = self.class_lambda.len();
        let (mut w0u, mut w1u, mut w0v, mut w1v) = (vec![0.0; n], vec![0.0; n], vec![0.0; n], vec![0.0; n]);
        let len = p1 - p0;
        for (c, &lambda) in self.class_lambda.iter().enumerate() {
            let scale = (2.0 * std::f64::consts::PI / lambda.sqrt()).min(1.0);
            let pieces = (len / scale).ceil().max(1.0) as usize;
            let h = len / pieces as f64;
            for j in 0..pieces {
                let lo = p0 + j as f64 * h;
                for (xi, wi) in x.iter().zip(w) {
                    let r = lo + 0.5 * h * (xi + 1.0);
                    let th = (r - p0) / len;
                    let m = block(lambda, self.gamma, t - r);
                    let ww = 0.5 * h * wi;
                    w0u[c] += ww * (1.0 - th) * m[0][1];
                    w1u[c] += ww * th * m[0][1];
                    w0v[c] += ww * (1.0 - th) * m[1][1];
                    w1v[c] += ww * th * m[1][1];
                }
            }
        }
        (w0u, w1u, w0v, w1v)
    }

    /// Right limit at `t` from the left limit: `ξ(t+) = ξ(t−) + (0, μ({t}))`.
    pub fn right_limit(&self, xi: &StatePair, track: &ForcingTrack, t: f64) -> Result<StatePair> {
        self.check(xi)?;
        let mut out = xi.clone();
        if let Some(h) = track.atom_at(t) {
            out.v.axpy(1.0, h);
        }
        Ok(out)
    }

    /// `μ({t})`: the velocity jump across `t`.
    pub fn jump_report(&self, mu: &VectorMeasure, t: f64) -> HilbertVector {
        mu.atom_at(t)
    }
}
