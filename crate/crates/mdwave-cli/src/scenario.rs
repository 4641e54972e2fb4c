//! Scenario files: nested key-value TOML with units in the key names.

use std::f64::consts::PI;

use rand::Rng;
use serde::Deserialize;

use mdwave::dynamics::SolverConfig;
use mdwave::measure::{GlobalMeasure, HilbertVector, VectorMeasure};
use mdwave::sampling::{member_rng, random_state};
use mdwave::spectral::{Grid, ModeGrid, Nonlinearity, Perturbation, StatePair};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Experiment {
    Simulate,
    LinearCheck,
    MeasureApprox,
    Attractor,
    KernelVsAttractor,
    Splitting,
    Cascade,
    Inequality,
    OdeDemo,
}

impl Experiment {
    pub fn tag(self) -> &'static str {
        match self {
            Experiment::Simulate => "simulate",
            Experiment::LinearCheck => "linear-check",
            Experiment::MeasureApprox => "measure-approx",
            Experiment::Attractor => "attractor",
            Experiment::KernelVsAttractor => "kernel-vs-attractor",
            Experiment::Splitting => "splitting",
            Experiment::Cascade => "cascade",
            Experiment::Inequality => "inequality",
            Experiment::OdeDemo => "ode-demo",
        }
    }
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Scenario {
    pub name: String,
    #[serde(default)]
    pub description: String,
    pub experiment: Experiment,
    /// Acceptance criteria this scenario exercises.
    #[serde(default)]
    pub criteria: Vec<u32>,
    #[serde(default)]
    pub checks: Vec<String>,
    pub output_dir: Option<String>,
    #[serde(default)]
    pub model: ModelSpec,
    #[serde(default)]
    pub forcing: ForcingSpec,
    #[serde(default)]
    pub run: RunSpec,
    #[serde(default)]
    pub params: Params,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ModelSpec {
    pub dimension: usize,
    pub cutoff: usize,
    pub padding: usize,
    pub gamma: f64,
    pub alpha: f64,
    pub nonlinearity: NonlinearitySpec,
}

impl Default for ModelSpec {
    fn default() -> Self {
        Self { dimension: 1, cutoff: 16, padding: 3, gamma: 1.0, alpha: 0.25, nonlinearity: NonlinearitySpec::default() }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum PerturbationKind {
    Zero,
    Cubic,
    Sine,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct NonlinearitySpec {
    pub quintic: f64,
    pub perturbation: PerturbationKind,
    pub cubic_coefficient: f64,
    pub linear: f64,
}

impl Default for NonlinearitySpec {
    fn default() -> Self {
        Self { quintic: 1.0, perturbation: PerturbationKind::Zero, cubic_coefficient: 0.0, linear: 0.0 }
    }
}

impl NonlinearitySpec {
    pub fn build(&self) -> Nonlinearity {
        let h = match self.perturbation {
            PerturbationKind::Zero => Perturbation::Zero,
            PerturbationKind::Cubic => Perturbation::Cubic(self.cubic_coefficient),
            PerturbationKind::Sine => Perturbation::Sine,
        };
        Nonlinearity { quintic: self.quintic, h, linear: self.linear }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ForcingKind {
    Zero,
    /// Smooth density on the run window.
    Smooth,
    /// Smooth density repeated with `period_seconds`.
    PeriodicSmooth,
    /// Explicit atoms.
    Atoms,
    /// Explicit atoms repeated with `period_seconds`.
    PeriodicAtoms,
    /// `count` seeded random atoms on the run window.
    RandomAtoms,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AtomSpec {
    pub time_seconds: f64,
    pub mode: usize,
    pub value: f64,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ForcingSpec {
    pub kind: ForcingKind,
    pub amplitude: f64,
    pub period_seconds: f64,
    pub count: usize,
    pub atoms: Vec<AtomSpec>,
}

impl Default for ForcingSpec {
    fn default() -> Self {
        Self { kind: ForcingKind::Zero, amplitude: 1.0, period_seconds: 2.0 * PI, count: 0, atoms: Vec::new() }
    }
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct RunSpec {
    pub tau_seconds: f64,
    pub t_end_seconds: f64,
    pub dt_seconds: f64,
    pub seed: u64,
    /// `‖ξ_τ‖_E` of the seeded initial datum; `0` starts from rest.
    pub initial_energy: f64,
    pub ensemble_energies: Vec<f64>,
    pub transient_seconds: f64,
    /// Number of dt halvings for order checks.
    pub refinements: usize,
}

impl Default for RunSpec {
    fn default() -> Self {
        Self {
            tau_seconds: 0.0,
            t_end_seconds: 1.0,
            dt_seconds: 0.01,
            seed: 0,
            initial_energy: 1.0,
            ensemble_energies: Vec::new(),
            transient_seconds: 0.0,
            refinements: 2,
        }
    }
}

/// Experiment-specific knobs; each experiment reads the ones it needs.
#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct Params {
    pub samples: usize,
    pub cells: Vec<usize>,
    pub gammas: Vec<f64>,
    pub resolutions: Vec<usize>,
    pub atom_counts: Vec<usize>,
    pub spikes: Option<f64>,
    pub horizons_seconds: Vec<f64>,
    pub shifts_seconds: Vec<f64>,
    pub trials: usize,
    pub shift_l: Option<f64>,
    pub early_window_seconds: f64,
    pub tolerance: f64,
    pub ratio_band: [f64; 2],
    pub spread_limit: f64,
}

impl Default for Params {
    fn default() -> Self {
        Self {
            samples: 100,
            cells: vec![10, 100, 1000],
            gammas: vec![0.5, 1.0, 2.0],
            resolutions: vec![16, 32, 64],
            atom_counts: vec![4, 8, 16],
            spikes: Some(50.0),
            horizons_seconds: vec![10.0, 20.0, 40.0],
            shifts_seconds: Vec::new(),
            trials: 10,
            shift_l: None,
            early_window_seconds: 10.0,
            tolerance: 1e-10,
            ratio_band: [3.5, 4.5],
            spread_limit: 2.0,
        }
    }
}

/// Why a scenario could not be turned into solver inputs.
#[derive(Debug)]
pub enum ScenarioError {
    Parse(String),
    Precondition(String),
}

impl Scenario {
    pub fn parse(text: &str) -> Result<Self, ScenarioError> {
        let s: Scenario = toml::from_str(text).map_err(|e| ScenarioError::Parse(e.to_string()))?;
        s.validate()?;
        Ok(s)
    }

    fn validate(&self) -> Result<(), ScenarioError> {
        let pre = |m: String| Err(ScenarioError::Precondition(m));
        if !(self.run.dt_seconds > 0.0) {
            return pre(format!("dt_seconds must be positive, got {}", self.run.dt_seconds));
        }
        if !(self.run.t_end_seconds > self.run.tau_seconds) {
            return pre("t_end_seconds must exceed tau_seconds".into());
        }
        let grid = self.grid().map_err(|e| ScenarioError::Precondition(e.to_string()))?;
        if let Some(a) = self.forcing.atoms.iter().find(|a| a.mode >= grid.hilbert_dim()) {
            return pre(format!("atom mode {} outside the {} retained coordinates", a.mode, grid.hilbert_dim()));
        }
        if matches!(self.forcing.kind, ForcingKind::PeriodicSmooth | ForcingKind::PeriodicAtoms) && !(self.forcing.period_seconds > 0.0) {
            return pre("period_seconds must be positive".into());
        }
        Ok(())
    }

    pub fn grid(&self) -> mdwave::Result<Grid> {
        ModeGrid::new(self.model.dimension, self.model.cutoff, self.model.padding)
    }

    pub fn solver(&self) -> SolverConfig {
        SolverConfig::with_dt(self.run.dt_seconds)
    }

    /// Seeded initial datum at `initial_energy` (stream 0).
    pub fn initial_state(&self, grid: &Grid) -> StatePair {
        self.state_at(grid, self.run.initial_energy, 0)
    }

    pub fn state_at(&self, grid: &Grid, energy: f64, stream: u64) -> StatePair {
        if energy == 0.0 {
            return StatePair::zeros(grid);
        }
        random_state(grid, &mut member_rng(self.run.seed, stream), energy)
    }

    /// Forcing on the whole line.
    pub fn global_forcing(&self, grid: &Grid) -> mdwave::Result<GlobalMeasure> {
        let dim = grid.hilbert_dim();
        let f = &self.forcing;
        match f.kind {
            ForcingKind::Zero => Ok(GlobalMeasure::zero(dim)),
            ForcingKind::PeriodicSmooth => {
                GlobalMeasure::periodic(smooth_density(dim, 0.0, f.period_seconds, f.amplitude)?, f.period_seconds, 0.0)
            }
            ForcingKind::PeriodicAtoms => GlobalMeasure::periodic(self.explicit_atoms(dim, 0.0, f.period_seconds)?, f.period_seconds, 0.0),
            _ => {
                let w = self.window_forcing(grid)?;
                GlobalMeasure::explicit(vec![w])
            }
        }
    }

    /// Forcing restricted to `[τ, T]`.
    pub fn window_forcing(&self, grid: &Grid) -> mdwave::Result<VectorMeasure> {
        let dim = grid.hilbert_dim();
        let (a, b) = (self.run.tau_seconds, self.run.t_end_seconds);
        let f = &self.forcing;
        match f.kind {
            ForcingKind::Zero => Ok(VectorMeasure::zero(a, b, dim)),
            ForcingKind::Smooth => smooth_density(dim, a, b, f.amplitude),
            ForcingKind::Atoms => self.explicit_atoms(dim, a, b),
            ForcingKind::RandomAtoms => {
                let mut rng = member_rng(self.run.seed, 1 << 32);
                let atoms = (0..f.count)
                    .map(|_| {
                        let t = rng.gen_range(a..b);
                        let h: Vec<f64> = (0..dim).map(|k| f.amplitude * rng.gen_range(-1.0..1.0) / (1.0 + k as f64)).collect();
                        (t, HilbertVector::from_vec(h))
                    })
                    .collect();
                VectorMeasure::from_atoms(a, b, dim, atoms)
            }
            ForcingKind::PeriodicSmooth | ForcingKind::PeriodicAtoms => self.global_forcing(grid)?.window(a, b),
        }
    }

    fn explicit_atoms(&self, dim: usize, a: f64, b: f64) -> mdwave::Result<VectorMeasure> {
        let atoms = self
            .forcing
            .atoms
            .iter()
            .map(|s| (s.time_seconds, HilbertVector::basis(dim, s.mode).scale(s.value)))
            .collect();
        VectorMeasure::from_atoms(a, b, dim, atoms)
    }
}

/// Density `amp·(1 + ½ sin t, ½ cos 2t, ¼ sin 0.7t, …)` in the leading basis directions.
pub fn smooth_density(dim: usize, a: f64, b: f64, amp: f64) -> mdwave::Result<VectorMeasure> {
    let nodes = ((b - a) * 100.0).ceil().max(2.0) as usize;
    VectorMeasure::sampled_density(a, b, dim, nodes, |t| {
        let mut v = HilbertVector::zeros(dim);
        let c = v.coeffs_mut();
        let shape = [1.0 + 0.5 * t.sin(), 0.5 * (2.0 * t).cos(), 0.25 * (0.7 * t).sin(), 0.1 * (1.3 * t).cos(), 0.1 * t.sin()];
        for (ci, s) in c.iter_mut().zip(shape) {
            *ci = amp * s;
        }
        v
    })
}
