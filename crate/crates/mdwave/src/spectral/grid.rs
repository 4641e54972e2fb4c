use std::f64::consts::PI;
use std::fmt;
use std::sync::Arc;

use num_complex::Complex64;
use rustfft::{Fft, FftPlanner};

use crate::{Error, Result};

/// Basis function attached to a real coordinate of a [`crate::measure::HilbertVector`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BasisKind {
    Constant,
    Cos,
    Sin,
}

/// One real coordinate: its kind and the FFT-layout slot of the representative `k`.
#[derive(Clone, Copy, Debug)]
pub struct BasisEntry {
    pub kind: BasisKind,
    pub slot: usize,
    pub neg_slot: usize,
    pub k2: i64,
}

/// Truncated Fourier mode set on the `d`-torus plus the padded physical grid.
///
/// Coefficients are stored in FFT layout with `N` slots per axis; the retained
/// wavenumbers satisfy `|k_i| ≤ N/2 − 1` and the Nyquist slot is always zero.
pub struct ModeGrid {
    d: usize,
    n: usize,
    padding: usize,
    m: usize,
    wave: Vec<[i64; 3]>,
    active: Vec<bool>,
    lambda: Vec<f64>,
    neg: Vec<usize>,
    padded_slot: Vec<usize>,
    basis: Vec<BasisEntry>,
    fwd: Arc<dyn Fft<f64>>,
    inv: Arc<dyn Fft<f64>>,
}

impl fmt::Debug for ModeGrid {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "ModeGrid(d={}, N={}, padding={}, M={})", self.d, self.n, self.padding, self.m)
    }
}

impl PartialEq for ModeGrid {
    fn eq(&self, other: &Self) -> bool {
        self.d == other.d && self.n == other.n && self.padding == other.padding
    }
}

pub type Grid = Arc<ModeGrid>;

fn wavenumber(j: usize, n: usize) -> i64 {
    if j < n / 2 {
        j as i64
    } else {
        j as i64 - n as i64
    }
}

impl ModeGrid {
    /// `d ∈ {1, 3}`, even `n ≥ 4`, padding `≥ 3` (physical grid `M = padding · n`).
    pub fn new(d: usize, n: usize, padding: usize) -> Result<Grid> {
        if d != 1 && d != 3 {
            return Err(Error::Config(format!("dimension must be 1 or 3, got {d}")));
        }
        if n < 4 || !n.is_multiple_of(2) {
            return Err(Error::Config(format!("cutoff N must be even and >= 4, got {n}")));
        }
        if padding < 3 {
            return Err(Error::Config(format!("padding factor must be >= 3, got {padding}")));
        }
        let m = padding * n;
        let slots = n.pow(d as u32);
        let kmax = (n / 2 - 1) as i64;
        let mut wave = Vec::with_capacity(slots);
        let mut active = Vec::with_capacity(slots);
        let mut lambda = Vec::with_capacity(slots);
        let mut padded_slot = Vec::with_capacity(slots);
        for s in 0..slots {
            let mut k = [0i64; 3];
            let mut rem = s;
            for ax in (0..d).rev() {
                k[ax] = wavenumber(rem % n, n);
                rem /= n;
            }
            let on = k.iter().all(|c| c.abs() <= kmax);
            let k2: i64 = k.iter().map(|c| c * c).sum();
            let mut p = 0usize;
            for &c in k.iter().take(d) {
                p = p * m + c.rem_euclid(m as i64) as usize;
            }
            wave.push(k);
            active.push(on);
            lambda.push(1.0 + k2 as f64);
            padded_slot.push(p);
        }
        let slot_of = |k: [i64; 3]| -> usize {
            let mut s = 0usize;
            for &c in k.iter().take(d) {
                s = s * n + c.rem_euclid(n as i64) as usize;
            }
            s
        };
        let neg: Vec<usize> = wave.iter().map(|k| slot_of([-k[0], -k[1], -k[2]])).collect();
        let mut reps: Vec<usize> = (0..slots)
            .filter(|&s| active[s] && {
                let k = wave[s];
                k.iter().take(d).find(|&&c| c != 0).is_some_and(|&c| c > 0)
            })
            .collect();
        reps.sort_by_key(|&s| {
            let k = wave[s];
            (k.iter().map(|c| c * c).sum::<i64>(), k)
        });
        let mut basis = vec![BasisEntry { kind: BasisKind::Constant, slot: 0, neg_slot: 0, k2: 0 }];
        for s in reps {
            let k2 = wave[s].iter().map(|c| c * c).sum();
            basis.push(BasisEntry { kind: BasisKind::Cos, slot: s, neg_slot: neg[s], k2 });
            basis.push(BasisEntry { kind: BasisKind::Sin, slot: s, neg_slot: neg[s], k2 });
        }
        let mut planner = FftPlanner::new();
        let fwd = planner.plan_fft_forward(m);
        let inv = planner.plan_fft_inverse(m);
        Ok(Arc::new(Self { d, n, padding, m, wave, active, lambda, neg, padded_slot, basis, fwd, inv }))
    }

    pub fn dim(&self) -> usize {
        self.d
    }

    pub fn cutoff(&self) -> usize {
        self.n
    }

    pub fn padding(&self) -> usize {
        self.padding
    }

    /// Physical points per axis.
    pub fn physical(&self) -> usize {
        self.m
    }

    pub fn slots(&self) -> usize {
        self.wave.len()
    }

    pub fn wave(&self, slot: usize) -> [i64; 3] {
        self.wave[slot]
    }

    pub fn is_active(&self, slot: usize) -> bool {
        self.active[slot]
    }

    /// `1 + |k|²`.
    pub fn lambda(&self, slot: usize) -> f64 {
        self.lambda[slot]
    }

    pub fn neg_slot(&self, slot: usize) -> usize {
        self.neg[slot]
    }

    /// Slot of an active wavevector.
    pub fn slot_of(&self, k: [i64; 3]) -> Option<usize> {
        let kmax = (self.n / 2 - 1) as i64;
        if k.iter().skip(self.d).any(|&c| c != 0) || k.iter().any(|c| c.abs() > kmax) {
            return None;
        }
        let mut s = 0usize;
        for &c in k.iter().take(self.d) {
            s = s * self.n + c.rem_euclid(self.n as i64) as usize;
        }
        Some(s)
    }

    pub fn max_abs_wave(&self, slot: usize) -> i64 {
        self.wave[slot].iter().map(|c| c.abs()).max().unwrap_or(0)
    }

    /// Real orthonormal basis, ordered by nondecreasing `|k|²`.
    pub fn basis(&self) -> &[BasisEntry] {
        &self.basis
    }

    /// Number of real coordinates, `(N − 1)^d`.
    pub fn hilbert_dim(&self) -> usize {
        self.basis.len()
    }

    /// `(2π)^d`.
    pub fn volume(&self) -> f64 {
        (2.0 * PI).powi(self.d as i32)
    }

    /// Quadrature weight of one physical cell, `(2π/M)^d`.
    pub fn cell(&self) -> f64 {
        (2.0 * PI / self.m as f64).powi(self.d as i32)
    }

    pub fn physical_len(&self) -> usize {
        self.m.pow(self.d as u32)
    }

    pub(crate) fn padded_slot(&self, slot: usize) -> usize {
        self.padded_slot[slot]
    }

    /// In-place multidimensional transform over the padded grid.
    pub(crate) fn transform(&self, data: &mut [Complex64], inverse: bool) {
        let plan = if inverse { &self.inv } else { &self.fwd };
        let m = self.m;
        match self.d {
            1 => plan.process(data),
            _ => {
                // axis 2 is contiguous
                plan.process(data);
                let mut buf = vec![Complex64::new(0.0, 0.0); m];
                for i in 0..m {
                    for k in 0..m {
                        for j in 0..m {
                            buf[j] = data[(i * m + j) * m + k];
                        }
                        plan.process(&mut buf);
                        for j in 0..m {
                            data[(i * m + j) * m + k] = buf[j];
                        }
                    }
                }
                for j in 0..m {
                    for k in 0..m {
                        for i in 0..m {
                            buf[i] = data[(i * m + j) * m + k];
                        }
                        plan.process(&mut buf);
                        for i in 0..m {
                            data[(i * m + j) * m + k] = buf[i];
                        }
                    }
                }
            }
        }
    }
}
