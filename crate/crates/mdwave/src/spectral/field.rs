use std::sync::Arc;

use num_complex::Complex64;

use super::grid::{BasisKind, Grid};
use crate::measure::HilbertVector;
use crate::{Error, Result};

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

/// Lebesgue exponent for grid norms.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Exponent {
    P(f64),
    Inf,
}

/// Real field on the torus stored as Fourier coefficients `û(k)` (FFT layout).
#[derive(Clone, Debug)]
pub struct SpectralField {
    grid: Grid,
    coeffs: Vec<Complex64>,
}

impl PartialEq for SpectralField {
    fn eq(&self, other: &Self) -> bool {
        *self.grid == *other.grid && self.coeffs == other.coeffs
    }
}

impl SpectralField {
    pub fn zeros(grid: &Grid) -> Self {
        Self { grid: Arc::clone(grid), coeffs: vec![ZERO; grid.slots()] }
    }

    /// Builds from raw coefficients; inactive slots are cleared and conjugate
    /// symmetry is enforced by averaging `û(k)` with `conj(û(−k))`.
    pub fn from_coeffs(grid: &Grid, coeffs: Vec<Complex64>) -> Result<Self> {
        if coeffs.len() != grid.slots() {
            return Err(Error::GridMismatch(format!("{} coefficients for {} slots", coeffs.len(), grid.slots())));
        }
        let mut out = Self { grid: Arc::clone(grid), coeffs };
        out.symmetrize();
        Ok(out)
    }

    /// Constant field `c`.
    pub fn constant(grid: &Grid, c: f64) -> Self {
        let mut f = Self::zeros(grid);
        f.coeffs[0] = Complex64::new(c, 0.0);
        f
    }

    /// `amp · cos(k·x)` for an active wavevector.
    pub fn cosine(grid: &Grid, k: [i64; 3], amp: f64) -> Result<Self> {
        let slot = grid.slot_of(k).ok_or_else(|| Error::domain(format!("wavevector {k:?} not in the mode set")))?;
        let mut f = Self::zeros(grid);
        if slot == 0 {
            f.coeffs[0] = Complex64::new(amp, 0.0);
        } else {
            f.coeffs[slot] = Complex64::new(0.5 * amp, 0.0);
            f.coeffs[grid.neg_slot(slot)] = Complex64::new(0.5 * amp, 0.0);
        }
        Ok(f)
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    pub(crate) fn coeffs_mut(&mut self) -> &mut [Complex64] {
        &mut self.coeffs
    }

    pub fn coeff(&self, k: [i64; 3]) -> Complex64 {
        self.grid.slot_of(k).map_or(ZERO, |s| self.coeffs[s])
    }

    fn symmetrize(&mut self) {
        let g = Arc::clone(&self.grid);
        for s in 0..g.slots() {
            if !g.is_active(s) {
                self.coeffs[s] = ZERO;
            }
        }
        for s in 0..g.slots() {
            let t = g.neg_slot(s);
            if t > s {
                let avg = 0.5 * (self.coeffs[s] + self.coeffs[t].conj());
                self.coeffs[s] = avg;
                self.coeffs[t] = avg.conj();
            } else if t == s {
                self.coeffs[s] = Complex64::new(self.coeffs[s].re, 0.0);
            }
        }
    }

    pub(crate) fn check(&self, other: &Self) -> Result<()> {
        if *self.grid != *other.grid {
            return Err(Error::GridMismatch(format!("{:?} vs {:?}", self.grid, other.grid)));
        }
        Ok(())
    }

    fn assert_same(&self, other: &Self) {
        assert!(*self.grid == *other.grid, "field grid mismatch: {:?} vs {:?}", self.grid, other.grid);
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        out.axpy(1.0, other);
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        let mut out = self.clone();
        out.axpy(-1.0, other);
        out
    }

    pub fn scale(&self, c: f64) -> Self {
        Self { grid: Arc::clone(&self.grid), coeffs: self.coeffs.iter().map(|z| z * c).collect() }
    }

    /// `self += c · other`.
    pub fn axpy(&mut self, c: f64, other: &Self) {
        self.assert_same(other);
        for (a, b) in self.coeffs.iter_mut().zip(&other.coeffs) {
            *a += b * c;
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|z| *z == ZERO)
    }

    /// Applies the real per-mode multiplier `m(λ_k)`.
    pub fn multiply(&self, m: impl Fn(f64) -> f64) -> Self {
        let g = &self.grid;
        Self {
            grid: Arc::clone(g),
            coeffs: self.coeffs.iter().enumerate().map(|(s, z)| z * m(g.lambda(s))).collect(),
        }
    }

    /// `∫ u v` over the torus.
    pub fn inner(&self, other: &Self) -> f64 {
        self.inner_hs(other, 0.0)
    }

    /// `H^α` inner product with weight `(1 + |k|²)^α`.
    pub fn inner_hs(&self, other: &Self, alpha: f64) -> f64 {
        self.assert_same(other);
        let g = &self.grid;
        let mut acc = 0.0;
        for (s, (a, b)) in self.coeffs.iter().zip(&other.coeffs).enumerate() {
            let w = if alpha == 0.0 { 1.0 } else { g.lambda(s).powf(alpha) };
            acc += w * (a.re * b.re + a.im * b.im);
        }
        g.volume() * acc
    }

    /// `‖u‖_{H^α}` from the coefficients.
    pub fn norm_hs(&self, alpha: f64) -> f64 {
        self.inner_hs(self, alpha).max(0.0).sqrt()
    }

    pub fn norm_l2(&self) -> f64 {
        self.norm_hs(0.0)
    }

    /// `‖∇u‖_{L²}`.
    pub fn norm_grad(&self) -> f64 {
        let g = &self.grid;
        let acc: f64 = self.coeffs.iter().enumerate().map(|(s, z)| (g.lambda(s) - 1.0) * z.norm_sqr()).sum();
        (g.volume() * acc).sqrt()
    }

    /// Values on the padded physical grid (row-major, `M^d` points).
    pub fn to_physical(&self) -> Vec<f64> {
        let g = &self.grid;
        let mut buf = vec![ZERO; g.physical_len()];
        for (s, z) in self.coeffs.iter().enumerate() {
            if *z != ZERO {
                buf[g.padded_slot(s)] = *z;
            }
        }
        g.transform(&mut buf, true);
        buf.iter().map(|z| z.re).collect()
    }

    /// Spectral projection of physical samples onto the retained modes.
    pub fn from_physical(grid: &Grid, values: &[f64]) -> Result<Self> {
        let spectrum = full_spectrum(grid, values)?;
        let coeffs = (0..grid.slots()).map(|s| spectrum[grid.padded_slot(s)]).collect();
        Self::from_coeffs(grid, coeffs)
    }

    /// `‖u‖_{L^p}` by quadrature on the padded grid.
    pub fn norm_lp(&self, p: Exponent) -> f64 {
        grid_lp(&self.grid, &self.to_physical(), p)
    }

    /// `‖(1 + |k|²)^{α/2} û‖` measured in `L^p` on the padded grid.
    pub fn norm_hap(&self, alpha: f64, p: Exponent) -> f64 {
        if alpha == 0.0 {
            return self.norm_lp(p);
        }
        self.multiply(|l| l.powf(0.5 * alpha)).norm_lp(p)
    }

    /// Coordinates in the real orthonormal basis (ordered by eigenvalue).
    pub fn to_hilbert(&self) -> HilbertVector {
        let g = &self.grid;
        let root = g.volume().sqrt();
        let c = std::f64::consts::SQRT_2 / root;
        let coeffs = g
            .basis()
            .iter()
            .map(|b| match b.kind {
                BasisKind::Constant => self.coeffs[0].re * root,
                BasisKind::Cos => 2.0 * self.coeffs[b.slot].re / c,
                BasisKind::Sin => -2.0 * self.coeffs[b.slot].im / c,
            })
            .collect();
        HilbertVector::from_vec(coeffs)
    }

    pub fn from_hilbert(grid: &Grid, v: &HilbertVector) -> Result<Self> {
        if v.dim() != grid.hilbert_dim() {
            return Err(Error::GridMismatch(format!(
                "vector of dimension {} on a grid with {} modes",
                v.dim(),
                grid.hilbert_dim()
            )));
        }
        let root = grid.volume().sqrt();
        let c = std::f64::consts::SQRT_2 / root;
        let mut coeffs = vec![ZERO; grid.slots()];
        for (b, &x) in grid.basis().iter().zip(v.coeffs()) {
            match b.kind {
                BasisKind::Constant => coeffs[0].re = x / root,
                BasisKind::Cos => {
                    coeffs[b.slot].re += 0.5 * c * x;
                    coeffs[b.neg_slot].re += 0.5 * c * x;
                }
                BasisKind::Sin => {
                    coeffs[b.slot].im -= 0.5 * c * x;
                    coeffs[b.neg_slot].im += 0.5 * c * x;
                }
            }
        }
        Ok(Self { grid: Arc::clone(grid), coeffs })
    }

    /// `P_{N'}`: keeps modes with `max |k_i| ≤ N'/2`.
    pub fn project(&self, cutoff: usize) -> Self {
        let g = &self.grid;
        let lim = (cutoff / 2) as i64;
        Self {
            grid: Arc::clone(g),
            coeffs: self
                .coeffs
                .iter()
                .enumerate()
                .map(|(s, z)| if g.max_abs_wave(s) <= lim { *z } else { ZERO })
                .collect(),
        }
    }
}

/// Untruncated spectrum of physical samples: `û(k)` for every padded wavenumber.
pub fn full_spectrum(grid: &Grid, values: &[f64]) -> Result<Vec<Complex64>> {
    if values.len() != grid.physical_len() {
        return Err(Error::GridMismatch(format!("{} samples for {} grid points", values.len(), grid.physical_len())));
    }
    let mut buf: Vec<Complex64> = values.iter().map(|&x| Complex64::new(x, 0.0)).collect();
    grid.transform(&mut buf, false);
    let scale = 1.0 / grid.physical_len() as f64;
    buf.iter_mut().for_each(|z| *z *= scale);
    Ok(buf)
}

/// `‖·‖_{H^α}` of physical samples using their full padded spectrum.
pub fn sample_norm_hs(grid: &Grid, values: &[f64], alpha: f64) -> Result<f64> {
    let spectrum = full_spectrum(grid, values)?;
    let m = grid.physical() as i64;
    let d = grid.dim();
    let mut acc = 0.0;
    for (i, z) in spectrum.iter().enumerate() {
        let mut rem = i;
        let mut k2 = 0i64;
        for _ in 0..d {
            let j = (rem % m as usize) as i64;
            rem /= m as usize;
            let k = if j <= m / 2 { j } else { j - m };
            k2 += k * k;
        }
        acc += (1.0 + k2 as f64).powf(alpha) * z.norm_sqr();
    }
    Ok((grid.volume() * acc).sqrt())
}

/// Grid quadrature of `‖·‖_{L^p}` for physical samples.
pub fn grid_lp(grid: &Grid, values: &[f64], p: Exponent) -> f64 {
    match p {
        Exponent::Inf => values.iter().fold(0.0f64, |m, x| m.max(x.abs())),
        Exponent::P(p) => {
            let s: f64 = values.iter().map(|x| x.abs().powf(p)).sum();
            (s * grid.cell()).powf(1.0 / p)
        }
    }
}

/// Energy-space element `ξ = (u, ∂_t u)`.
#[derive(Clone, Debug, PartialEq)]
pub struct StatePair {
    pub u: SpectralField,
    pub v: SpectralField,
}

impl StatePair {
    pub fn new(u: SpectralField, v: SpectralField) -> Result<Self> {
        u.check(&v)?;
        Ok(Self { u, v })
    }

    pub fn zeros(grid: &Grid) -> Self {
        Self { u: SpectralField::zeros(grid), v: SpectralField::zeros(grid) }
    }

    pub fn grid(&self) -> &Grid {
        self.u.grid()
    }

    /// `‖ξ‖²_{E^α} = ‖u‖²_{H^{1+α}} + ‖v‖²_{H^α}`.
    pub fn energy_norm_sq(&self, alpha: f64) -> f64 {
        self.u.inner_hs(&self.u, 1.0 + alpha) + self.v.inner_hs(&self.v, alpha)
    }

    pub fn energy_norm_alpha(&self, alpha: f64) -> f64 {
        self.energy_norm_sq(alpha).max(0.0).sqrt()
    }

    pub fn energy_norm(&self) -> f64 {
        self.energy_norm_alpha(0.0)
    }

    /// Norm in the weaker space `H × H^{−1}`.
    pub fn weak_norm(&self) -> f64 {
        (self.u.inner_hs(&self.u, 0.0) + self.v.inner_hs(&self.v, -1.0)).max(0.0).sqrt()
    }

    pub fn add(&self, other: &Self) -> Self {
        Self { u: self.u.add(&other.u), v: self.v.add(&other.v) }
    }

    pub fn sub(&self, other: &Self) -> Self {
        Self { u: self.u.sub(&other.u), v: self.v.sub(&other.v) }
    }

    pub fn scale(&self, c: f64) -> Self {
        Self { u: self.u.scale(c), v: self.v.scale(c) }
    }

    pub fn axpy(&mut self, c: f64, other: &Self) {
        self.u.axpy(c, &other.u);
        self.v.axpy(c, &other.v);
    }

    pub fn is_zero(&self) -> bool {
        self.u.is_zero() && self.v.is_zero()
    }

    /// `(P_{N'} ξ, Q_{N'} ξ)`.
    pub fn project(&self, cutoff: usize) -> (Self, Self) {
        let p = Self { u: self.u.project(cutoff), v: self.v.project(cutoff) };
        let q = self.sub(&p);
        (p, q)
    }
}
