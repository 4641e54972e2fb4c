use serde::{Deserialize, Serialize};

/// Real coefficient vector in the orthonormal Fourier basis of L² on the torus.
///
/// Coordinates are ordered by nondecreasing Laplace eigenvalue, so "the first `N`
/// modes" is a prefix. Vectors only interoperate with vectors of equal dimension;
/// mixing dimensions is a programming error and panics.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct HilbertVector {
    coeffs: Vec<f64>,
}

impl HilbertVector {
    pub fn zeros(dim: usize) -> Self {
        Self { coeffs: vec![0.0; dim] }
    }

    pub fn from_vec(coeffs: Vec<f64>) -> Self {
        Self { coeffs }
    }

    pub fn scalar(x: f64) -> Self {
        Self { coeffs: vec![x] }
    }

    /// Unit vector along coordinate `i`.
    pub fn basis(dim: usize, i: usize) -> Self {
        let mut v = Self::zeros(dim);
        v.coeffs[i] = 1.0;
        v
    }

    pub fn dim(&self) -> usize {
        self.coeffs.len()
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    pub fn coeffs_mut(&mut self) -> &mut [f64] {
        &mut self.coeffs
    }

    pub fn into_vec(self) -> Vec<f64> {
        self.coeffs
    }

    fn check(&self, other: &Self) {
        assert_eq!(
            self.dim(),
            other.dim(),
            "HilbertVector dimension mismatch ({} vs {})",
            self.dim(),
            other.dim()
        );
    }

    pub fn dot(&self, other: &Self) -> f64 {
        self.check(other);
        self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a * b).sum()
    }

    pub fn norm(&self) -> f64 {
        self.coeffs.iter().map(|a| a * a).sum::<f64>().sqrt()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|&a| a == 0.0)
    }

    pub fn is_finite(&self) -> bool {
        self.coeffs.iter().all(|a| a.is_finite())
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        out.add_assign(other);
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.check(other);
        Self {
            coeffs: self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a - b).collect(),
        }
    }

    pub fn scale(&self, c: f64) -> Self {
        Self { coeffs: self.coeffs.iter().map(|a| c * a).collect() }
    }

    pub fn add_assign(&mut self, other: &Self) {
        self.check(other);
        for (a, b) in self.coeffs.iter_mut().zip(&other.coeffs) {
            *a += b;
        }
    }

    /// `self += c * other`.
    pub fn axpy(&mut self, c: f64, other: &Self) {
        self.check(other);
        for (a, b) in self.coeffs.iter_mut().zip(&other.coeffs) {
            *a += c * b;
        }
    }

    /// Linear interpolation `(1 - θ) a + θ b`.
    pub fn lerp(a: &Self, b: &Self, theta: f64) -> Self {
        a.check(b);
        Self {
            coeffs: a
                .coeffs
                .iter()
                .zip(&b.coeffs)
                .map(|(x, y)| x + theta * (y - x))
                .collect(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn arithmetic() {
        let a = HilbertVector::from_vec(vec![3.0, 4.0]);
        let b = HilbertVector::basis(2, 1);
        assert_eq!(a.norm(), 5.0);
        assert_eq!(a.dot(&b), 4.0);
        assert_eq!(a.add(&b).coeffs(), &[3.0, 5.0]);
        assert_eq!(a.sub(&b).coeffs(), &[3.0, 3.0]);
        assert_eq!(HilbertVector::lerp(&a, &b, 0.5).coeffs(), &[1.5, 2.5]);
        let mut c = a.clone();
        c.axpy(-2.0, &b);
        assert_eq!(c.coeffs(), &[3.0, 2.0]);
    }

    #[test]
    #[should_panic(expected = "dimension mismatch")]
    fn mismatched_dimensions_panic() {
        HilbertVector::zeros(2).dot(&HilbertVector::zeros(3));
    }
}
