use crate::{Error, Result};

/// Real 2×2 matrix acting on `(w, w')`.
pub type Block = [[f64; 2]; 2];

pub const IDENTITY: Block = [[1.0, 0.0], [0.0, 1.0]];

/// Relative band `|λ − γ²/4| ≤ CRITICAL_BAND·λ` treated as critical damping.
pub const CRITICAL_BAND: f64 = 1e-8;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Branch {
    Underdamped,
    Critical,
    Overdamped,
}

pub fn classify(lambda: f64, gamma: f64) -> Branch {
    let disc = lambda - 0.25 * gamma * gamma;
    if disc.abs() <= CRITICAL_BAND * lambda {
        Branch::Critical
    } else if disc > 0.0 {
        Branch::Underdamped
    } else {
        Branch::Overdamped
    }
}

/// `exp(t [[0, 1], [−λ, −γ]])`.
pub fn mode_block(lambda: f64, gamma: f64, t: f64) -> Result<Block> {
    if !(t >= 0.0) || !t.is_finite() {
        return Err(Error::domain(format!("block time must be finite and >= 0, got {t}")));
    }
    if !(lambda >= 1.0) || !lambda.is_finite() {
        return Err(Error::domain(format!("eigenvalue must be >= 1, got {lambda}")));
    }
    if !(gamma >= 0.0) || !gamma.is_finite() {
        return Err(Error::domain(format!("damping must be >= 0, got {gamma}")));
    }
    Ok(block(lambda, gamma, t))
}

/// Series for `cos√z` and `sin√z/√z` (entire in `z`, valid for either sign).
fn even_odd_series(z: f64) -> (f64, f64) {
    let (mut c, mut s) = (1.0, 1.0);
    let (mut tc, mut ts) = (1.0, 1.0);
    for n in 1..40 {
        let n = n as f64;
        tc *= -z / ((2.0 * n - 1.0) * (2.0 * n));
        ts *= -z / ((2.0 * n) * (2.0 * n + 1.0));
        c += tc;
        s += ts;
        if tc.abs() < 1e-18 && ts.abs() < 1e-18 {
            break;
        }
    }
    (c, s)
}

pub(crate) fn block(lambda: f64, gamma: f64, t: f64) -> Block {
    if t == 0.0 {
        return IDENTITY;
    }
    let sigma = 0.5 * gamma;
    let disc = lambda - sigma * sigma;
    let z = disc * t * t;
    // e^{−σt}·cos-like and e^{−σt}·sin-like/frequency parts
    let (ec, es) = if z.abs() <= 1.0 {
        let (c, s) = even_odd_series(z);
        let e = (-sigma * t).exp();
        (e * c, e * t * s)
    } else if disc > 0.0 {
        let w = disc.sqrt();
        let (sn, cs) = (w * t).sin_cos();
        let e = (-sigma * t).exp();
        (e * cs, e * sn / w)
    } else {
        let kappa = (-disc).sqrt();
        let ep = ((kappa - sigma) * t).exp();
        let em = (-(sigma + kappa) * t).exp();
        (0.5 * (ep + em), 0.5 * (ep - em) / kappa)
    };
    [[ec + sigma * es, es], [-lambda * es, ec - sigma * es]]
}

pub fn mul(a: &Block, b: &Block) -> Block {
    let mut c = [[0.0; 2]; 2];
    for i in 0..2 {
        for j in 0..2 {
            c[i][j] = a[i][0] * b[0][j] + a[i][1] * b[1][j];
        }
    }
    c
}

/// Operator norm in the mode energy `λ|w|² + |w'|²`, i.e. `‖D B D⁻¹‖₂` with `D = diag(√λ, 1)`.
pub fn energy_operator_norm(b: &Block, lambda: f64) -> f64 {
    let r = lambda.sqrt();
    let m = [[b[0][0], r * b[0][1]], [b[1][0] / r, b[1][1]]];
    spectral_norm(&m)
}

fn spectral_norm(m: &Block) -> f64 {
    let fro2: f64 = m.iter().flatten().map(|x| x * x).sum();
    let det = m[0][0] * m[1][1] - m[0][1] * m[1][0];
    let disc = (fro2 * fro2 - 4.0 * det * det).max(0.0).sqrt();
    (0.5 * (fro2 + disc)).sqrt()
}

/// Slowest decay rate over all modes `λ ≥ 1`: `γ/2` for `γ ≤ 2`, else the slow
/// overdamped root at `λ = 1`.
pub fn delta_star(gamma: f64) -> f64 {
    let sigma = 0.5 * gamma;
    if sigma <= 1.0 {
        sigma
    } else {
        1.0 / (sigma + (sigma * sigma - 1.0).sqrt())
    }
}
