//! Counter-based random streams and random smooth fields.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::measure::HilbertVector;
use crate::spectral::{Grid, SpectralField, StatePair};

/// Independent stream `stream` of the generator seeded by `seed`; results do not
/// depend on the order in which streams are drawn.
pub fn member_rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// Coordinates uniform in `[−1, 1]` times `(1 + |k|²)^{−decay}` in the real basis.
pub fn random_field(grid: &Grid, rng: &mut impl Rng, decay: f64) -> SpectralField {
    let coeffs = grid
        .basis()
        .iter()
        .map(|b| rng.gen_range(-1.0..=1.0) * (1.0 + b.k2 as f64).powf(-decay))
        .collect();
    SpectralField::from_hilbert(grid, &HilbertVector::from_vec(coeffs)).expect("basis dimension")
}

/// Random smooth state rescaled to `‖ξ‖_E = energy_norm`.
pub fn random_state(grid: &Grid, rng: &mut impl Rng, energy_norm: f64) -> StatePair {
    let u = random_field(grid, rng, 1.5);
    let v = random_field(grid, rng, 1.0);
    let xi = StatePair::new(u, v).expect("same grid");
    let n = xi.energy_norm();
    if n == 0.0 {
        xi
    } else {
        xi.scale(energy_norm / n)
    }
}
