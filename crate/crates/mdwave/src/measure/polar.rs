use super::{HilbertVector, VectorMeasure};
use crate::numerics::gl8;
use crate::{Error, Result};

/// Polar form `μ = ρ_μ |μ|` with `‖ρ_μ‖ = 1` on the support of `|μ|`.
#[derive(Clone, Debug)]
pub struct Polar {
    measure: VectorMeasure,
}

pub fn polar_decompose(mu: &VectorMeasure) -> Result<Polar> {
    if mu.total_variation() == 0.0 {
        return Err(Error::precondition("polar decomposition of the zero measure is undefined"));
    }
    Ok(Polar { measure: mu.clone() })
}

impl Polar {
    /// Atoms of `|μ|` as `(time, mass)`.
    pub fn variation_atoms(&self) -> Vec<(f64, f64)> {
        self.measure.atoms().iter().map(|a| (a.time, a.value.norm())).collect()
    }

    /// Density of `|μ|` with respect to Lebesgue measure.
    pub fn variation_density(&self, t: f64) -> f64 {
        self.measure.density_at(t).norm()
    }

    /// `|μ|` of the closed window `[s, t]`.
    pub fn variation_of(&self, s: f64, t: f64) -> f64 {
        let atoms: f64 = self
            .measure
            .atoms()
            .iter()
            .filter(|a| a.time >= s && a.time <= t)
            .map(|a| a.value.norm())
            .sum();
        atoms + self.measure.density_variation(s, t)
    }

    /// Unit direction `ρ_μ(t)`; `None` off the support of `|μ|`.
    pub fn direction(&self, t: f64) -> Option<HilbertVector> {
        let atom = self.measure.atom_at(t);
        let n = atom.norm();
        if n > 0.0 {
            return Some(atom.scale(1.0 / n));
        }
        let r = self.measure.density_at(t);
        let n = r.norm();
        (n > 0.0).then(|| r.scale(1.0 / n))
    }

    /// `∫_{[s,t]} ρ_μ d|μ|` with the requested brackets.
    pub fn reconstruct(&self, s: f64, t: f64, left_closed: bool, right_closed: bool) -> HilbertVector {
        let mut acc = HilbertVector::zeros(self.measure.dim());
        for (time, mass) in self.variation_atoms() {
            let after = time > s || (left_closed && time == s);
            let before = time < t || (right_closed && time == t);
            if after && before && mass > 0.0 {
                acc.axpy(mass, &self.direction(time).expect("atom on support"));
            }
        }
        let (x, w) = gl8();
        for seg in self.measure.segments() {
            let lo = s.max(seg.t0);
            let hi = t.min(seg.t1);
            if hi <= lo {
                continue;
            }
            for (xi, wi) in x.iter().zip(w) {
                let tq = lo + 0.5 * (hi - lo) * (xi + 1.0);
                let r = seg.at(tq);
                let n = r.norm();
                if n > 0.0 {
                    acc.axpy(0.5 * (hi - lo) * wi * n, &r.scale(1.0 / n));
                }
            }
        }
        acc
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_atom() {
        let h = HilbertVector::from_vec(vec![0.6, 0.8]);
        let mu = VectorMeasure::from_atoms(0.0, 1.0, 2, vec![(0.4, h.scale(3.0))]).unwrap();
        let p = polar_decompose(&mu).unwrap();
        assert_eq!(p.variation_atoms(), vec![(0.4, 3.0)]);
        let d = p.direction(0.4).unwrap();
        assert!(d.sub(&h).norm() < 1e-15);
        assert!(p.direction(0.5).is_none());
    }

    #[test]
    fn zero_measure_rejected() {
        assert!(polar_decompose(&VectorMeasure::zero(0.0, 1.0, 2)).is_err());
    }
}
