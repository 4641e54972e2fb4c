use crate::measure::{HilbertVector, VectorMeasure};
use crate::{Error, Result};

/// Tensor products of time hats and basis vectors.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TestFamily {
    /// Hat nodes spread uniformly over the common interval.
    pub nodes: usize,
    /// Leading basis directions.
    pub modes: usize,
}

impl Default for TestFamily {
    fn default() -> Self {
        Self { nodes: 9, modes: 8 }
    }
}

fn hat(t: f64, center: f64, width: f64) -> f64 {
    (1.0 - (t - center).abs() / width).max(0.0)
}

/// `max_φ |∫(φ, μ₁(dt)) − ∫(φ, μ₂(dt))|` over the family, on the union of both intervals.
pub fn weak_star_distance(mu1: &VectorMeasure, mu2: &VectorMeasure, family: &TestFamily) -> Result<f64> {
    let (a1, b1) = mu1.interval();
    let (a2, b2) = mu2.interval();
    let (a, b) = (a1.min(a2), b1.max(b2));
    if mu1.dim() != mu2.dim() {
        return Err(Error::GridMismatch(format!("measure dimensions {} and {}", mu1.dim(), mu2.dim())));
    }
    let dim = mu1.dim().min(mu2.dim());
    let nodes = family.nodes.max(2);
    let width = (b - a) / (nodes - 1) as f64;
    let mut best: f64 = 0.0;
    for j in 0..nodes {
        let center = a + width * j as f64;
        for m in 0..family.modes.min(dim) {
            let e = HilbertVector::basis(dim, m);
            let phi = |t: f64| e.scale(hat(t, center, width));
            let val = mu1.integrate_against(&phi) - mu2.integrate_against(&phi);
            best = best.max(val.abs());
        }
    }
    Ok(best)
}
