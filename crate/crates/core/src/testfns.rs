//! Test functions with their domains, optima and, for the stochastic ones,
//! the random coefficients ("realizations") that parametrize them.

use std::f64::consts::{E, PI};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::objective::{Objective, Sense};
use crate::rng::RandomSource;
use crate::vector::{Bounds, RealVector};

/// Ackley function; global minimum 0 at the origin.
pub fn ackley(x: &[f64]) -> f64 {
    let d = x.len() as f64;
    let sq = x.iter().map(|v| v * v).sum::<f64>() / d;
    let cos = x.iter().map(|v| (2.0 * PI * v).cos()).sum::<f64>() / d;
    -20.0 * (-0.2 * sq.sqrt()).exp() - cos.exp() + 20.0 + E
}

/// `(sum |x_i|) * exp(-sum x_i^2)`. In two dimensions: four maxima of
/// `1/sqrt(e)` at `(+-1/2, +-1/2)`.
pub fn four_peak(x: &[f64]) -> f64 {
    let abs: f64 = x.iter().map(|v| v.abs()).sum();
    let sq: f64 = x.iter().map(|v| v * v).sum();
    abs * (-sq).exp()
}

pub const STANDING_WAVE_BETA: f64 = 15.0;
pub const STANDING_WAVE_M: i32 = 5;

/// `[exp(-sum (x_i/beta)^(2m)) - 2 exp(-sum (x_i - pi)^2)] * prod cos^2 x_i`.
pub fn standing_wave(x: &[f64], beta: f64, m: i32) -> f64 {
    let envelope: f64 = x.iter().map(|v| (v / beta).powi(2 * m)).sum();
    let defect: f64 = x.iter().map(|v| (v - PI) * (v - PI)).sum();
    let product: f64 = x.iter().map(|v| v.cos().powi(2)).product();
    ((-envelope).exp() - 2.0 * (-defect).exp()) * product
}

/// `(sum |x_i|) * exp(-sum sin(x_i^2))`; zero only at the origin, where it is
/// not differentiable.
pub fn forest(x: &[f64]) -> f64 {
    let abs: f64 = x.iter().map(|v| v.abs()).sum();
    let s: f64 = x.iter().map(|v| (v * v).sin()).sum();
    abs * (-s).exp()
}

/// Shape parameters of the stochastic grid function.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GridShape {
    /// Width of the random wells.
    pub alpha: f64,
    /// Width of the fixed well at `(pi, pi)`.
    pub beta: f64,
    /// Grid size; wells sit at `(i, j)` for `i, j = 1..=k`.
    pub k: usize,
}

impl Default for GridShape {
    fn default() -> Self {
        GridShape {
            alpha: 1.0,
            beta: 1.0,
            k: 10,
        }
    }
}

/// `-5 exp(-beta r_pi^2) - sum_ij eps_ij exp(-alpha [(x-i)^2 + (y-j)^2])`.
///
/// `eps` is `k * k` coefficients, row `i - 1` holding `eps_i1..eps_ik`.
pub fn stochastic_grid(x: f64, y: f64, eps: &[f64], shape: GridShape) -> Result<f64> {
    let k = shape.k;
    if eps.len() != k * k {
        return Err(Error::config(format!(
            "stochastic grid needs {}x{} = {} coefficients, got {}",
            k,
            k,
            k * k,
            eps.len()
        )));
    }
    let well = -5.0 * (-shape.beta * ((x - PI).powi(2) + (y - PI).powi(2))).exp();
    let mut sum = 0.0;
    for i in 1..=k {
        let dx = (x - i as f64).powi(2);
        let row = &eps[(i - 1) * k..i * k];
        for (j, e) in (1..=k).zip(row) {
            sum += e * (-shape.alpha * (dx + (y - j as f64).powi(2))).exp();
        }
    }
    Ok(well - sum)
}

/// `sum_i eps_i |x_i|^i` with 1-based `i`.
pub fn stochastic_powers(x: &[f64], eps: &[f64]) -> Result<f64> {
    if eps.len() != x.len() {
        return Err(Error::config(format!(
            "stochastic powers needs {} coefficients, got {}",
            x.len(),
            eps.len()
        )));
    }
    Ok(x.iter()
        .zip(eps)
        .enumerate()
        .map(|(i, (v, e))| e * v.abs().powi(i as i32 + 1))
        .sum())
}

/// Sum of squares; a sanity baseline, not one of the published functions.
pub fn sphere(x: &[f64]) -> f64 {
    x.iter().map(|v| v * v).sum()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RealizationPolicy {
    /// One draw, reused for every evaluation.
    #[default]
    Frozen,
    /// Fresh coefficients before every evaluation.
    ResamplePerEvaluation,
}

/// Uniform `[0, 1)` coefficients of a stochastic function.
#[derive(Debug, Clone, PartialEq)]
pub struct Realization {
    coefficients: Vec<f64>,
    resampler: Option<RandomSource>,
}

impl Realization {
    pub fn frozen(coefficients: Vec<f64>) -> Self {
        Realization {
            coefficients,
            resampler: None,
        }
    }

    /// Freezes `len` fresh draws from `rng`.
    pub fn draw(len: usize, rng: &mut RandomSource) -> Self {
        Realization::frozen((0..len).map(|_| rng.uniform()).collect())
    }

    /// Redraws all `len` coefficients from `rng` before each evaluation.
    pub fn resampling(len: usize, rng: RandomSource) -> Self {
        Realization {
            coefficients: vec![0.0; len],
            resampler: Some(rng),
        }
    }

    pub fn policy(&self) -> RealizationPolicy {
        if self.resampler.is_some() {
            RealizationPolicy::ResamplePerEvaluation
        } else {
            RealizationPolicy::Frozen
        }
    }

    pub fn coefficients(&self) -> &[f64] {
        &self.coefficients
    }

    pub fn len(&self) -> usize {
        self.coefficients.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coefficients.is_empty()
    }

    /// Coefficients for the next evaluation.
    fn next(&mut self) -> &[f64] {
        if let Some(rng) = &mut self.resampler {
            for c in &mut self.coefficients {
                *c = rng.uniform();
            }
        }
        &self.coefficients
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FunctionKind {
    Ackley,
    FourPeak,
    StandingWave,
    Forest,
    StochasticGrid,
    StochasticPowers,
    Sphere,
}

impl FunctionKind {
    pub const ALL: [FunctionKind; 7] = [
        FunctionKind::Ackley,
        FunctionKind::FourPeak,
        FunctionKind::StandingWave,
        FunctionKind::Forest,
        FunctionKind::StochasticGrid,
        FunctionKind::StochasticPowers,
        FunctionKind::Sphere,
    ];

    pub fn name(self) -> &'static str {
        match self {
            FunctionKind::Ackley => "ackley",
            FunctionKind::FourPeak => "four_peak",
            FunctionKind::StandingWave => "standing_wave",
            FunctionKind::Forest => "forest",
            FunctionKind::StochasticGrid => "stochastic_grid",
            FunctionKind::StochasticPowers => "stochastic_powers",
            FunctionKind::Sphere => "sphere",
        }
    }

    pub fn from_name(name: &str) -> Result<Self> {
        FunctionKind::ALL
            .into_iter()
            .find(|k| k.name() == name)
            .ok_or_else(|| Error::Lookup {
                name: name.to_string(),
                valid: names().iter().map(|s| s.to_string()).collect(),
            })
    }

    pub fn is_stochastic(self) -> bool {
        matches!(
            self,
            FunctionKind::StochasticGrid | FunctionKind::StochasticPowers
        )
    }
}

/// Registry names, in registry order.
pub fn names() -> Vec<&'static str> {
    FunctionKind::ALL.iter().map(|k| k.name()).collect()
}

/// Where a function's best value is attained.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct KnownOptimum {
    /// One representative optimizer.
    pub position: RealVector,
    /// Exact optimum value; `None` when it depends on the realization.
    pub value: Option<f64>,
    /// Range the optimum value can take over all realizations.
    pub value_range: (f64, f64),
    pub kind: Sense,
    /// Number of distinct global optimizers.
    pub multiplicity: u64,
}

impl KnownOptimum {
    fn exact(position: RealVector, value: f64, kind: Sense, multiplicity: u64) -> Self {
        KnownOptimum {
            position,
            value: Some(value),
            value_range: (value, value),
            kind,
            multiplicity,
        }
    }
}

/// Registry entry: a function instantiated in a given dimension.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TestFunction {
    pub kind: FunctionKind,
    pub dim: usize,
    pub bounds: Bounds,
    pub sense: Sense,
    pub known_optimum: Option<KnownOptimum>,
    pub stochastic: bool,
    /// Sanity baseline rather than one of the published functions.
    pub baseline: bool,
    pub grid: GridShape,
}

/// Looks up `name` and instantiates it in `d` dimensions.
pub fn registry(name: &str, d: usize) -> Result<TestFunction> {
    TestFunction::new(FunctionKind::from_name(name)?, d)
}

impl TestFunction {
    pub fn new(kind: FunctionKind, d: usize) -> Result<Self> {
        if d == 0 {
            return Err(Error::config("dimension must be >= 1"));
        }
        let origin = || RealVector::zeros(d);
        let (bounds, sense, optimum) = match kind {
            FunctionKind::Ackley => (
                Bounds::uniform(d, -32.768, 32.768)?,
                Sense::Minimize,
                KnownOptimum::exact(origin(), 0.0, Sense::Minimize, 1),
            ),
            FunctionKind::FourPeak => {
                // all |x_i| equal to 1/sqrt(2d), any sign pattern
                let a = 1.0 / (2.0 * d as f64).sqrt();
                let position = RealVector::filled(d, a);
                let value = four_peak(&position);
                (
                    Bounds::uniform(d, -10.0, 10.0)?,
                    Sense::Maximize,
                    KnownOptimum::exact(position, value, Sense::Maximize, 1u64 << d.min(63)),
                )
            }
            FunctionKind::StandingWave => {
                let position = RealVector::filled(d, PI);
                let value = standing_wave(&position, STANDING_WAVE_BETA, STANDING_WAVE_M);
                (
                    Bounds::uniform(d, -20.0, 20.0)?,
                    Sense::Minimize,
                    KnownOptimum::exact(position, value, Sense::Minimize, 1),
                )
            }
            FunctionKind::Forest => (
                Bounds::uniform(d, -2.0 * PI, 2.0 * PI)?,
                Sense::Minimize,
                KnownOptimum::exact(origin(), 0.0, Sense::Minimize, 1),
            ),
            FunctionKind::StochasticGrid => {
                if d != 2 {
                    return Err(Error::config(format!(
                        "stochastic_grid is two-dimensional, got d = {d}"
                    )));
                }
                let k = GridShape::default().k as f64;
                (
                    Bounds::uniform(2, 0.0, k)?,
                    Sense::Minimize,
                    KnownOptimum {
                        position: RealVector::from([PI, PI]),
                        value: None,
                        value_range: (-(k * k + 5.0), -5.0),
                        kind: Sense::Minimize,
                        multiplicity: 1,
                    },
                )
            }
            FunctionKind::StochasticPowers => (
                Bounds::uniform(d, -5.0, 5.0)?,
                Sense::Minimize,
                KnownOptimum::exact(origin(), 0.0, Sense::Minimize, 1),
            ),
            FunctionKind::Sphere => (
                Bounds::uniform(d, -10.0, 10.0)?,
                Sense::Minimize,
                KnownOptimum::exact(origin(), 0.0, Sense::Minimize, 1),
            ),
        };
        Ok(TestFunction {
            kind,
            dim: d,
            bounds,
            sense,
            known_optimum: Some(optimum),
            stochastic: kind.is_stochastic(),
            baseline: kind == FunctionKind::Sphere,
            grid: GridShape::default(),
        })
    }

    pub fn name(&self) -> &'static str {
        self.kind.name()
    }

    /// Number of random coefficients one realization needs (0 when
    /// deterministic).
    pub fn realization_len(&self) -> usize {
        match self.kind {
            FunctionKind::StochasticGrid => self.grid.k * self.grid.k,
            FunctionKind::StochasticPowers => self.dim,
            _ => 0,
        }
    }

    /// Evaluates with explicit coefficients; `eps` is ignored by
    /// deterministic functions.
    pub fn evaluate_with(&self, x: &[f64], eps: &[f64]) -> Result<f64> {
        Error::check_dim(self.dim, x.len())?;
        Ok(match self.kind {
            FunctionKind::Ackley => ackley(x),
            FunctionKind::FourPeak => four_peak(x),
            FunctionKind::StandingWave => standing_wave(x, STANDING_WAVE_BETA, STANDING_WAVE_M),
            FunctionKind::Forest => forest(x),
            FunctionKind::StochasticGrid => stochastic_grid(x[0], x[1], eps, self.grid)?,
            FunctionKind::StochasticPowers => stochastic_powers(x, eps)?,
            FunctionKind::Sphere => sphere(x),
        })
    }

    /// Binds a realization drawn from `rng` under `policy`. Frozen policies
    /// consume draws from `rng` now; resampling ones take a child stream.
    pub fn objective(&self, policy: RealizationPolicy, rng: &mut RandomSource) -> TestObjective {
        let len = self.realization_len();
        let realization = match policy {
            RealizationPolicy::Frozen => Realization::draw(len, rng),
            RealizationPolicy::ResamplePerEvaluation => {
                Realization::resampling(len, RandomSource::new(rng.next_u64()))
            }
        };
        TestObjective {
            function: self.clone(),
            realization,
        }
    }

    /// Binds the given realization.
    pub fn with_realization(&self, realization: Realization) -> Result<TestObjective> {
        let len = self.realization_len();
        if len > 0 && realization.len() != len {
            return Err(Error::config(format!(
                "{} needs {len} coefficients, got {}",
                self.name(),
                realization.len()
            )));
        }
        Ok(TestObjective {
            function: self.clone(),
            realization,
        })
    }

    /// Deterministic functions only.
    pub fn deterministic(&self) -> Result<TestObjective> {
        if self.stochastic {
            return Err(Error::config(format!(
                "{} needs a realization",
                self.name()
            )));
        }
        self.with_realization(Realization::frozen(Vec::new()))
    }
}

/// A registry function bound to a realization, usable as an [`Objective`].
#[derive(Debug, Clone)]
pub struct TestObjective {
    function: TestFunction,
    realization: Realization,
}

impl TestObjective {
    pub fn function(&self) -> &TestFunction {
        &self.function
    }

    pub fn realization(&self) -> &Realization {
        &self.realization
    }
}

impl Objective for TestObjective {
    fn bounds(&self) -> &Bounds {
        &self.function.bounds
    }

    fn evaluate(&mut self, x: &[f64]) -> Result<f64> {
        let eps = self.realization.next();
        self.function.evaluate_with(x, eps)
    }
}
