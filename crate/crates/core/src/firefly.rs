//! The firefly engine.
//!
//! Each generation sweeps `i = 0..n`, `j = 0..=i` over a population ranked
//! brightest first. Firefly `i` moves toward `j` whenever `j` is strictly
//! brighter, and is re-evaluated immediately, so later comparisons in the
//! same sweep see the new position. After the sweep, a firefly that neither
//! moved nor has anyone strictly brighter than it takes a random step.
//! The population is then re-ranked.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::objective::{Objective, Sense};
use crate::rng::RandomSource;
use crate::vector::{self, RealVector};

/// Distribution of the randomization term.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Noise {
    /// Standard normal per component.
    Gaussian,
    /// Uniform on `[-0.5, 0.5)` per component.
    UniformCentered,
}

/// Which fireflies a firefly compares itself against.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Topology {
    /// Every brighter firefly earlier in the ranking.
    Pairwise,
    /// Only the current brightest member of the population. With `gamma = 0`
    /// this is the swarm limit of the algorithm; there is no velocity memory.
    GlobalBest,
}

/// Algorithm knobs.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FaParams {
    pub alpha: f64,
    pub beta0: f64,
    pub gamma: f64,
    /// `m` in `beta0 * exp(-gamma * r^m)`.
    pub distance_exponent: f64,
    pub population: usize,
    pub max_iterations: usize,
    /// Per-dimension multipliers on `alpha`; all ones when absent.
    pub scales: Option<RealVector>,
    pub sense: Sense,
    pub seed: u64,
    /// Geometric per-generation multiplier on `alpha`.
    pub alpha_decay: f64,
    pub noise: Noise,
    pub topology: Topology,
}

impl Default for FaParams {
    fn default() -> Self {
        FaParams {
            alpha: 0.2,
            beta0: 1.0,
            gamma: 1.0,
            distance_exponent: 2.0,
            population: 25,
            max_iterations: 20,
            scales: None,
            sense: Sense::Minimize,
            seed: 0,
            alpha_decay: 1.0,
            noise: Noise::Gaussian,
            topology: Topology::Pairwise,
        }
    }
}

impl FaParams {
    pub fn with_alpha(mut self, alpha: f64) -> Self {
        self.alpha = alpha;
        self
    }

    pub fn with_beta0(mut self, beta0: f64) -> Self {
        self.beta0 = beta0;
        self
    }

    pub fn with_gamma(mut self, gamma: f64) -> Self {
        self.gamma = gamma;
        self
    }

    pub fn with_distance_exponent(mut self, m: f64) -> Self {
        self.distance_exponent = m;
        self
    }

    pub fn with_population(mut self, n: usize) -> Self {
        self.population = n;
        self
    }

    pub fn with_max_iterations(mut self, iterations: usize) -> Self {
        self.max_iterations = iterations;
        self
    }

    pub fn with_scales(mut self, scales: impl Into<RealVector>) -> Self {
        self.scales = Some(scales.into());
        self
    }

    pub fn with_sense(mut self, sense: Sense) -> Self {
        self.sense = sense;
        self
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn with_alpha_decay(mut self, decay: f64) -> Self {
        self.alpha_decay = decay;
        self
    }

    pub fn with_noise(mut self, noise: Noise) -> Self {
        self.noise = noise;
        self
    }

    /// Switch to the degenerate variant where every firefly is attracted only
    /// by the current global best.
    pub fn global_best_mode(mut self) -> Self {
        self.topology = Topology::GlobalBest;
        self
    }

    /// Checks every parameter invariant. `max_iterations = 0` is accepted and
    /// means "evaluate the initial population only".
    pub fn validate(&self) -> Result<()> {
        let finite_nonneg = |v: f64| v.is_finite() && v >= 0.0;
        if !finite_nonneg(self.alpha) {
            return Err(Error::config(format!(
                "alpha must be >= 0, got {}",
                self.alpha
            )));
        }
        if !(self.beta0.is_finite() && self.beta0 > 0.0) {
            return Err(Error::config(format!(
                "beta0 must be > 0, got {}",
                self.beta0
            )));
        }
        if !finite_nonneg(self.gamma) {
            return Err(Error::config(format!(
                "gamma must be >= 0, got {}",
                self.gamma
            )));
        }
        if !(self.distance_exponent.is_finite() && self.distance_exponent > 0.0) {
            return Err(Error::config(format!(
                "distance exponent must be > 0, got {}",
                self.distance_exponent
            )));
        }
        if self.population < 2 {
            return Err(Error::config(format!(
                "population must be >= 2, got {}",
                self.population
            )));
        }
        if !(self.alpha_decay > 0.0 && self.alpha_decay <= 1.0) {
            return Err(Error::config(format!(
                "alpha decay must lie in (0, 1], got {}",
                self.alpha_decay
            )));
        }
        if let Some(scales) = &self.scales {
            if let Some((k, s)) = scales
                .iter()
                .enumerate()
                .find(|(_, s)| !(s.is_finite() && **s > 0.0))
            {
                return Err(Error::config(format!("scales[{k}] must be > 0, got {s}")));
            }
        }
        Ok(())
    }

    /// `alpha` after `iteration` generations of decay.
    pub fn alpha_at(&self, iteration: usize) -> f64 {
        if self.alpha_decay == 1.0 {
            self.alpha
        } else {
            self.alpha
                * self
                    .alpha_decay
                    .powi(iteration.min(i32::MAX as usize) as i32)
        }
    }

    fn scale(&self, k: usize) -> f64 {
        self.scales.as_ref().map_or(1.0, |s| s[k])
    }
}

/// Maps an objective value to brightness, where brighter is always better.
pub fn brightness(value: f64, sense: Sense) -> f64 {
    match sense {
        Sense::Maximize => value,
        Sense::Minimize => -value,
    }
}

/// `beta0 * exp(-gamma * r^m)`.
pub fn attractiveness(r: f64, params: &FaParams) -> f64 {
    if params.gamma == 0.0 {
        return params.beta0;
    }
    params.beta0 * (-params.gamma * r.powf(params.distance_exponent)).exp()
}

/// One move of `xi` toward `xj` with the configured `alpha`; no clamping.
pub fn move_towards(
    xi: &[f64],
    xj: &[f64],
    params: &FaParams,
    rng: &mut RandomSource,
) -> Result<RealVector> {
    move_with_alpha(xi, xj, params, params.alpha, rng)
}

/// One random step from `xi` with the configured `alpha`; no clamping.
pub fn random_walk(xi: &[f64], params: &FaParams, rng: &mut RandomSource) -> RealVector {
    walk_with_alpha(xi, params, params.alpha, rng)
}

fn move_with_alpha(
    xi: &[f64],
    xj: &[f64],
    params: &FaParams,
    alpha: f64,
    rng: &mut RandomSource,
) -> Result<RealVector> {
    let r = vector::distance(xi, xj)?;
    let beta = attractiveness(r, params);
    // (1 - beta) * a + beta * b lands exactly on b when beta == 1.
    Ok(xi
        .iter()
        .zip(xj)
        .enumerate()
        .map(|(k, (a, b))| {
            (1.0 - beta) * a + beta * b + alpha * params.scale(k) * draw(params.noise, rng)
        })
        .collect())
}

fn walk_with_alpha(
    xi: &[f64],
    params: &FaParams,
    alpha: f64,
    rng: &mut RandomSource,
) -> RealVector {
    xi.iter()
        .enumerate()
        .map(|(k, a)| a + alpha * params.scale(k) * draw(params.noise, rng))
        .collect()
}

fn draw(noise: Noise, rng: &mut RandomSource) -> f64 {
    match noise {
        Noise::Gaussian => rng.gaussian(),
        Noise::UniformCentered => rng.uniform() - 0.5,
    }
}

/// A firefly's position with its cached objective value and brightness.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FireflyState {
    pub position: RealVector,
    pub value: f64,
    pub intensity: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TraceRecord {
    pub iteration: usize,
    pub best_so_far: f64,
    pub current_best: f64,
    pub alpha_used: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunResult {
    pub best_position: RealVector,
    /// On the objective's scale, not brightness.
    pub best_value: f64,
    /// Exact number of objective calls.
    pub evaluations: u64,
    pub trace: Vec<TraceRecord>,
    /// Population after the last generation, brightest first.
    pub final_population: Vec<FireflyState>,
}

impl RunResult {
    pub fn final_positions(&self) -> impl Iterator<Item = &RealVector> {
        self.final_population.iter().map(|s| &s.position)
    }
}

/// A single optimization run in progress.
pub struct Swarm<O> {
    objective: O,
    params: FaParams,
    rng: RandomSource,
    population: Vec<FireflyState>,
    iteration: usize,
    evaluations: u64,
    best: Option<(RealVector, f64)>,
    trace: Vec<TraceRecord>,
}

impl<O: Objective> Swarm<O> {
    /// Validates `params`, then samples and evaluates `params.population`
    /// fireflies uniformly over the objective's bounds.
    pub fn new(objective: O, params: FaParams) -> Result<Self> {
        Self::check(&objective, &params)?;
        let mut rng = RandomSource::new(params.seed);
        let bounds = objective.bounds().clone();
        let positions = (0..params.population)
            .map(|_| {
                bounds
                    .lower()
                    .iter()
                    .zip(bounds.upper().iter())
                    .map(|(lo, hi)| rng.uniform_in(*lo, *hi))
                    .collect()
            })
            .collect();
        Self::start(objective, params, rng, positions)
    }

    /// Starts from the given positions instead of a random sample. The
    /// positions are clamped to the bounds; their count overrides
    /// `params.population`.
    pub fn with_positions(
        objective: O,
        params: FaParams,
        positions: Vec<RealVector>,
    ) -> Result<Self> {
        let params = FaParams {
            population: positions.len(),
            ..params
        };
        Self::check(&objective, &params)?;
        let rng = RandomSource::new(params.seed);
        Self::start(objective, params, rng, positions)
    }

    fn check(objective: &O, params: &FaParams) -> Result<()> {
        params.validate()?;
        if let Some(scales) = &params.scales {
            Error::check_dim(objective.dim(), scales.dim())?;
        }
        Ok(())
    }

    fn start(
        objective: O,
        params: FaParams,
        rng: RandomSource,
        positions: Vec<RealVector>,
    ) -> Result<Self> {
        let mut swarm = Swarm {
            objective,
            params,
            rng,
            population: Vec::with_capacity(positions.len()),
            iteration: 0,
            evaluations: 0,
            best: None,
            trace: Vec::new(),
        };
        for p in positions {
            let p = vector::clamp(&p, swarm.objective.bounds())?;
            let state = swarm.evaluate(p)?;
            swarm.population.push(state);
        }
        swarm.rank();
        Ok(swarm)
    }

    fn evaluate(&mut self, position: RealVector) -> Result<FireflyState> {
        let value = self.objective.evaluate(&position)?;
        self.evaluations += 1;
        if !value.is_finite() {
            return Err(Error::Evaluation(format!(
                "non-finite objective value {value} at {:?}",
                position.as_slice()
            )));
        }
        let improved = match &self.best {
            None => true,
            Some((_, best)) => self.params.sense.better(value, *best),
        };
        if improved {
            self.best = Some((position.clone(), value));
        }
        Ok(FireflyState {
            intensity: brightness(value, self.params.sense),
            position,
            value,
        })
    }

    // Stable, so equal intensities keep their current relative order.
    fn rank(&mut self) {
        self.population.sort_by(|a, b| {
            b.intensity
                .partial_cmp(&a.intensity)
                .expect("finite intensities")
        });
    }

    fn relocate(&mut self, i: usize, candidate: RealVector) -> Result<()> {
        let candidate = vector::clamp(&candidate, self.objective.bounds())?;
        self.population[i] = self.evaluate(candidate)?;
        Ok(())
    }

    /// Runs one generation.
    #[allow(clippy::needless_range_loop)]
    pub fn step(&mut self) -> Result<()> {
        let alpha = self.params.alpha_at(self.iteration);
        let n = self.population.len();
        let mut moved = vec![false; n];

        match self.params.topology {
            Topology::Pairwise => {
                for i in 0..n {
                    for j in 0..=i {
                        if self.population[j].intensity > self.population[i].intensity {
                            let next = move_with_alpha(
                                &self.population[i].position,
                                &self.population[j].position,
                                &self.params,
                                alpha,
                                &mut self.rng,
                            )?;
                            self.relocate(i, next)?;
                            moved[i] = true;
                        }
                    }
                }
            }
            Topology::GlobalBest => {
                let mut leader = 0;
                for i in 0..n {
                    if self.population[leader].intensity > self.population[i].intensity {
                        let next = move_with_alpha(
                            &self.population[i].position,
                            &self.population[leader].position,
                            &self.params,
                            alpha,
                            &mut self.rng,
                        )?;
                        self.relocate(i, next)?;
                        moved[i] = true;
                        if self.population[i].intensity > self.population[leader].intensity {
                            leader = i;
                        }
                    }
                }
            }
        }

        let brightest = self
            .population
            .iter()
            .map(|s| s.intensity)
            .fold(f64::NEG_INFINITY, f64::max);
        for i in 0..n {
            if moved[i] || self.population[i].intensity < brightest {
                continue;
            }
            let next = walk_with_alpha(
                &self.population[i].position,
                &self.params,
                alpha,
                &mut self.rng,
            );
            let next = vector::clamp(&next, self.objective.bounds())?;
            if next != self.population[i].position {
                self.population[i] = self.evaluate(next)?;
            }
        }

        self.rank();
        self.iteration += 1;
        self.trace.push(TraceRecord {
            iteration: self.iteration,
            best_so_far: self.best_value(),
            current_best: self.population[0].value,
            alpha_used: alpha,
        });
        Ok(())
    }

    /// Runs the remaining generations up to `max_iterations`.
    pub fn run_to_end(&mut self) -> Result<()> {
        while self.iteration < self.params.max_iterations {
            self.step()?;
        }
        Ok(())
    }

    pub fn population(&self) -> &[FireflyState] {
        &self.population
    }

    pub fn params(&self) -> &FaParams {
        &self.params
    }

    pub fn iteration(&self) -> usize {
        self.iteration
    }

    pub fn evaluations(&self) -> u64 {
        self.evaluations
    }

    pub fn best_position(&self) -> &RealVector {
        &self
            .best
            .as_ref()
            .expect("population is evaluated on construction")
            .0
    }

    pub fn best_value(&self) -> f64 {
        self.best
            .as_ref()
            .expect("population is evaluated on construction")
            .1
    }

    pub fn objective(&self) -> &O {
        &self.objective
    }

    pub fn finish(self) -> RunResult {
        let (best_position, best_value) =
            self.best.expect("population is evaluated on construction");
        RunResult {
            best_position,
            best_value,
            evaluations: self.evaluations,
            trace: self.trace,
            final_population: self.population,
        }
    }
}

/// Full run: random initialization, `max_iterations` generations.
pub fn run<O: Objective>(objective: O, params: &FaParams) -> Result<RunResult> {
    let mut swarm = Swarm::new(objective, params.clone())?;
    swarm.run_to_end()?;
    Ok(swarm.finish())
}

/// Full run from the given initial positions.
pub fn run_from<O: Objective>(
    objective: O,
    params: &FaParams,
    positions: Vec<RealVector>,
) -> Result<RunResult> {
    let mut swarm = Swarm::with_positions(objective, params.clone(), positions)?;
    swarm.run_to_end()?;
    Ok(swarm.finish())
}
