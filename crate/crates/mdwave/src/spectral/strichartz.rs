use crate::numerics::simpson;
use crate::{Error, Result};

/// Exponents `(p_t, p_x) = (2/q, 6/(1−q))` of the Strichartz family, `q ∈ (0, 1)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct StrichartzPair {
    pub time: f64,
    pub space: f64,
}

impl StrichartzPair {
    pub fn from_q(q: f64) -> Result<Self> {
        if !(q > 0.0 && q < 1.0) {
            return Err(Error::domain(format!("Strichartz parameter q = {q} outside (0, 1)")));
        }
        Ok(Self { time: 2.0 / q, space: 6.0 / (1.0 - q) })
    }

    /// `L⁴(L¹²)`.
    pub fn standard() -> Self {
        Self { time: 4.0, space: 12.0 }
    }
}

/// `(∫ n(s)^p ds)^{1/p}` over uniformly spaced samples `n(s)` (composite Simpson).
pub fn window_norm(samples: &[f64], dt: f64, p: f64) -> Result<f64> {
    let powered: Vec<f64> = samples.iter().map(|x| x.abs().powf(p)).collect();
    let integral = simpson(&powered, dt)
        .ok_or_else(|| Error::precondition(format!("window needs at least 3 samples, got {}", samples.len())))?;
    Ok(integral.max(0.0).powf(1.0 / p))
}

/// `(∫_t^{t+1} ‖u‖⁴_{L¹²} ds)^{1/4}` from uniformly spaced `‖u(s)‖_{L¹²}` samples.
pub fn strichartz_window(samples: &[f64], dt: f64) -> Result<f64> {
    window_norm(samples, dt, 4.0)
}

/// Sliding windows of length `window` over a uniform series: `(start time, norm)`.
pub fn window_series(t0: f64, dt: f64, values: &[f64], window: f64, p: f64) -> Vec<(f64, f64)> {
    let steps = (window / dt).round() as usize;
    if steps < 2 || values.len() <= steps {
        return Vec::new();
    }
    (0..values.len() - steps)
        .map(|i| (t0 + i as f64 * dt, window_norm(&values[i..=i + steps], dt, p).expect("enough samples")))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn constant_and_ramp() {
        let v = vec![2.5; 11];
        assert!((strichartz_window(&v, 0.1).unwrap() - 2.5).abs() < 1e-14);
        // n(s) = s on [0,1]: (∫ s⁴)^{1/4} = 5^{-1/4}; Simpson is not exact for s⁴ so refine
        let n = 2001;
        let ramp: Vec<f64> = (0..n).map(|i| i as f64 / (n - 1) as f64).collect();
        let got = strichartz_window(&ramp, 1.0 / (n - 1) as f64).unwrap();
        assert!((got - 5f64.powf(-0.25)).abs() < 1e-12);
        assert!(strichartz_window(&[1.0, 1.0], 0.5).is_err());
    }

    #[test]
    fn family_exponents() {
        let p = StrichartzPair::from_q(0.5).unwrap();
        assert_eq!(p, StrichartzPair::standard());
        assert!(StrichartzPair::from_q(1.0).is_err());
    }
}
