use serde::{Deserialize, Serialize};

use super::field::{SpectralField, StatePair};

/// Sub-quintic perturbation `h` with `h(0) = 0`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub enum Perturbation {
    Zero,
    /// `λ u³`
    Cubic(f64),
    /// `sin u`
    Sine,
}

/// `f(u) = c u⁵ + h(u) + L u` together with its antiderivative and derivative.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Nonlinearity {
    pub quintic: f64,
    pub h: Perturbation,
    pub linear: f64,
}

impl Default for Nonlinearity {
    fn default() -> Self {
        Self::quintic()
    }
}

impl Nonlinearity {
    pub fn quintic() -> Self {
        Self { quintic: 1.0, h: Perturbation::Zero, linear: 0.0 }
    }

    /// `f ≡ 0`.
    pub fn zero() -> Self {
        Self { quintic: 0.0, h: Perturbation::Zero, linear: 0.0 }
    }

    pub fn with_h(self, h: Perturbation) -> Self {
        Self { h, ..self }
    }

    /// `f_L = f + L u`.
    pub fn with_linear(self, linear: f64) -> Self {
        Self { linear, ..self }
    }

    pub fn is_zero(&self) -> bool {
        self.quintic == 0.0 && self.h == Perturbation::Zero && self.linear == 0.0
    }

    #[inline]
    pub fn f(&self, u: f64) -> f64 {
        let u2 = u * u;
        let h = match self.h {
            Perturbation::Zero => 0.0,
            Perturbation::Cubic(l) => l * u2 * u,
            Perturbation::Sine => u.sin(),
        };
        self.quintic * u2 * u2 * u + h + self.linear * u
    }

    /// `F(u) = ∫_0^u f`.
    #[inline]
    pub fn antiderivative(&self, u: f64) -> f64 {
        let u2 = u * u;
        let h = match self.h {
            Perturbation::Zero => 0.0,
            Perturbation::Cubic(l) => 0.25 * l * u2 * u2,
            Perturbation::Sine => 1.0 - u.cos(),
        };
        self.quintic * u2 * u2 * u2 / 6.0 + h + 0.5 * self.linear * u2
    }

    #[inline]
    pub fn derivative(&self, u: f64) -> f64 {
        let u2 = u * u;
        let h = match self.h {
            Perturbation::Zero => 0.0,
            Perturbation::Cubic(l) => 3.0 * l * u2,
            Perturbation::Sine => u.cos(),
        };
        5.0 * self.quintic * u2 * u2 + h + self.linear
    }

    /// Dealiased `f(u)`: evaluated on the padded grid and truncated to the mode set.
    pub fn apply(&self, u: &SpectralField) -> SpectralField {
        if self.is_zero() {
            return SpectralField::zeros(u.grid());
        }
        let vals: Vec<f64> = u.to_physical().into_iter().map(|x| self.f(x)).collect();
        SpectralField::from_physical(u.grid(), &vals).expect("same grid")
    }

    /// `(F(u), 1)` by padded-grid quadrature.
    pub fn potential_energy(&self, u: &SpectralField) -> f64 {
        if self.is_zero() {
            return 0.0;
        }
        let s: f64 = u.to_physical().into_iter().map(|x| self.antiderivative(x)).sum();
        s * u.grid().cell()
    }

    /// `½‖ξ‖²_E + (F(u), 1)`.
    pub fn nonlinear_energy(&self, xi: &StatePair) -> f64 {
        0.5 * xi.energy_norm_sq(0.0) + self.potential_energy(&xi.u)
    }
}
