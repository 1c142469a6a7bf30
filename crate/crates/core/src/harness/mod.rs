//! Seeded replicate experiments, their reports, and the paper suite.

mod hill;
mod landscape;
mod output;
mod suite;
mod trace;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::constrained::{self, PenaltyParams, VesselReport};
use crate::error::{Error, Result};
use crate::firefly::{self, FaParams, RunResult};
use crate::objective::Sense;
use crate::rng::RandomSource;
use crate::testfns::{registry, KnownOptimum, RealizationPolicy, TestFunction};
use crate::vector::{distance, RealVector};

pub use hill::{hill_climb, HillClimbParams, HillClimbResult};
pub use landscape::{
    landscape_grid, summarize, GridPoint, Landscape, LandscapeConfig, LandscapeSummary,
};
pub use output::{format_float, to_csv, to_json, write_file, OutputFormat};
pub use suite::{paper_experiment, paper_suite, PAPER_EXPERIMENTS};
pub use trace::{run_function, RunConfig, RunReport, RunSummary};

/// Target name of the pressure vessel problem.
pub const VESSEL: &str = "vessel";

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Algorithm {
    Firefly,
    /// Compass search from a uniform random start. Function targets only.
    HillClimb(HillClimbParams),
}

/// A run succeeds when every condition that is set holds.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct SuccessPredicate {
    /// Best value at least this good in the target's sense.
    pub value_threshold: Option<f64>,
    /// Best position within this distance of the known optimum.
    pub position_tolerance: Option<f64>,
    /// Vessel only: the reported design must be feasible.
    pub require_feasible: bool,
}

impl SuccessPredicate {
    pub fn value(threshold: f64) -> Self {
        SuccessPredicate {
            value_threshold: Some(threshold),
            ..Default::default()
        }
    }

    pub fn position(tolerance: f64) -> Self {
        SuccessPredicate {
            position_tolerance: Some(tolerance),
            ..Default::default()
        }
    }

    pub fn feasible_below(cost: f64) -> Self {
        SuccessPredicate {
            value_threshold: Some(cost),
            require_feasible: true,
            ..Default::default()
        }
    }

    pub fn is_defined(&self) -> bool {
        self.value_threshold.is_some() || self.position_tolerance.is_some() || self.require_feasible
    }

    fn check(
        &self,
        sense: Sense,
        value: f64,
        position: &[f64],
        optimum: Option<&KnownOptimum>,
        feasible: Option<bool>,
    ) -> Result<bool> {
        if let Some(t) = self.value_threshold {
            let ok = match sense {
                Sense::Minimize => value <= t,
                Sense::Maximize => value >= t,
            };
            if !ok {
                return Ok(false);
            }
        }
        if let Some(tol) = self.position_tolerance {
            let opt =
                optimum.ok_or_else(|| Error::config("position tolerance needs a known optimum"))?;
            if distance(position, &opt.position)? > tol {
                return Ok(false);
            }
        }
        if self.require_feasible && feasible != Some(true) {
            return Ok(false);
        }
        Ok(true)
    }
}

/// Peaks whose occupation by the final population is counted per run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CaptureSpec {
    pub peaks: Vec<RealVector>,
    pub radius: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentConfig {
    pub name: String,
    /// Registry name or [`VESSEL`].
    pub target: String,
    pub dim: usize,
    /// `seed` is replaced per replicate; `sense` follows the target.
    pub params: FaParams,
    pub replicates: usize,
    pub base_seed: u64,
    pub success: SuccessPredicate,
    /// Stochastic targets only.
    pub realization: RealizationPolicy,
    pub format: OutputFormat,
    pub algorithm: Algorithm,
    /// Vessel only.
    pub penalty: PenaltyParams,
    /// Vessel only: judge the design after rounding thicknesses up.
    pub snap_thickness: bool,
    pub capture: Option<CaptureSpec>,
}

impl ExperimentConfig {
    /// One replicate, no success predicate, frozen realizations. The
    /// params' sense is set from the target when it is known.
    pub fn new(target: impl Into<String>, dim: usize, params: FaParams) -> Self {
        let target = target.into();
        let mut params = params;
        if target == VESSEL {
            params.sense = Sense::Minimize;
        } else if let Ok(f) = registry(&target, dim) {
            params.sense = f.sense;
        }
        ExperimentConfig {
            name: target.clone(),
            target,
            dim,
            params,
            replicates: 1,
            base_seed: 0,
            success: SuccessPredicate::default(),
            realization: RealizationPolicy::Frozen,
            format: OutputFormat::Json,
            algorithm: Algorithm::Firefly,
            penalty: PenaltyParams::default(),
            snap_thickness: false,
            capture: None,
        }
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = name.into();
        self
    }

    pub fn with_replicates(mut self, replicates: usize) -> Self {
        self.replicates = replicates;
        self
    }

    pub fn with_base_seed(mut self, seed: u64) -> Self {
        self.base_seed = seed;
        self
    }

    pub fn with_success(mut self, success: SuccessPredicate) -> Self {
        self.success = success;
        self
    }

    pub fn with_realization(mut self, policy: RealizationPolicy) -> Self {
        self.realization = policy;
        self
    }

    pub fn with_format(mut self, format: OutputFormat) -> Self {
        self.format = format;
        self
    }

    pub fn with_algorithm(mut self, algorithm: Algorithm) -> Self {
        self.algorithm = algorithm;
        self
    }

    pub fn with_penalty(mut self, penalty: PenaltyParams) -> Self {
        self.penalty = penalty;
        self
    }

    pub fn with_snap_thickness(mut self, snap: bool) -> Self {
        self.snap_thickness = snap;
        self
    }

    pub fn with_capture(mut self, peaks: Vec<RealVector>, radius: f64) -> Self {
        self.capture = Some(CaptureSpec { peaks, radius });
        self
    }

    fn target(&self) -> Result<Target> {
        if self.target == VESSEL {
            if self.dim != 4 {
                return Err(Error::config(format!(
                    "vessel is four-dimensional, got d = {}",
                    self.dim
                )));
            }
            Ok(Target::Vessel)
        } else {
            Ok(Target::Function(registry(&self.target, self.dim)?))
        }
    }

    pub fn validate(&self) -> Result<()> {
        let target = self.target()?;
        if self.replicates == 0 {
            return Err(Error::config("replicates must be >= 1"));
        }
        self.params.validate()?;
        let has_optimum = match &target {
            Target::Vessel => true,
            Target::Function(f) => f.known_optimum.is_some(),
        };
        if has_optimum && !self.success.is_defined() {
            return Err(Error::config(format!(
                "{} has a known optimum, so a success predicate is required",
                self.target
            )));
        }
        match (&target, &self.algorithm) {
            (Target::Vessel, Algorithm::HillClimb(_)) => {
                return Err(Error::config(
                    "the hill climber runs on registry functions only",
                ));
            }
            (_, Algorithm::HillClimb(p)) => p.validate()?,
            _ => {}
        }
        if let Some(c) = &self.capture {
            if c.peaks.is_empty() {
                return Err(Error::config("capture needs at least one peak"));
            }
            if c.radius.is_nan() || c.radius <= 0.0 {
                return Err(Error::config("capture radius must be positive"));
            }
            for p in &c.peaks {
                Error::check_dim(self.dim, p.dim())?;
            }
            if matches!(self.algorithm, Algorithm::HillClimb(_)) {
                return Err(Error::config("capture needs a population"));
            }
        }
        Ok(())
    }

    /// Sense in which best values are compared.
    pub fn sense(&self) -> Sense {
        match &self.algorithm {
            Algorithm::Firefly => self.params.sense,
            Algorithm::HillClimb(_) => self
                .target()
                .map(|t| t.sense())
                .unwrap_or(self.params.sense),
        }
    }
}

enum Target {
    Function(TestFunction),
    Vessel,
}

impl Target {
    fn sense(&self) -> Sense {
        match self {
            Target::Function(f) => f.sense,
            Target::Vessel => Sense::Minimize,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReplicateRow {
    pub replicate: u64,
    pub seed: u64,
    /// For the vessel this is the penalized objective.
    pub best_value: f64,
    pub best_position: RealVector,
    /// Objective calls actually made.
    pub evaluations: u64,
    /// Population size times iterations (the hill climber's budget).
    pub nominal_evaluations: u64,
    pub success: bool,
    /// Vessel only.
    pub cost: Option<f64>,
    pub feasible: Option<bool>,
    /// Final population members within the capture radius, per peak.
    pub peak_hits: Option<Vec<u64>>,
}

impl ReplicateRow {
    pub fn all_peaks_occupied(&self) -> Option<bool> {
        self.peak_hits.as_ref().map(|h| h.iter().all(|&c| c > 0))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CaptureSummary {
    /// Runs in which each peak was occupied.
    pub runs_occupied: Vec<u64>,
    pub all_occupied_runs: u64,
    pub all_occupied_fraction: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Aggregates {
    pub runs: u64,
    pub successes: u64,
    pub success_rate: f64,
    pub best_value: f64,
    /// Mean of the two middle values for an even run count.
    pub median_value: f64,
    pub worst_value: f64,
    pub mean_evaluations: f64,
    /// Lowest cost among feasible vessel designs.
    pub best_feasible_cost: Option<f64>,
    pub capture: Option<CaptureSummary>,
}

impl Aggregates {
    /// Recomputes everything from the rows. `rows` must be nonempty.
    pub fn from_rows(rows: &[ReplicateRow], sense: Sense) -> Aggregates {
        let runs = rows.len() as u64;
        let successes = rows.iter().filter(|r| r.success).count() as u64;
        let mut values: Vec<f64> = rows.iter().map(|r| r.best_value).collect();
        values.sort_by(f64::total_cmp);
        let m = values.len();
        let median_value = if m % 2 == 1 {
            values[m / 2]
        } else {
            0.5 * (values[m / 2 - 1] + values[m / 2])
        };
        let (lowest, highest) = (values[0], values[m - 1]);
        let (best_value, worst_value) = match sense {
            Sense::Minimize => (lowest, highest),
            Sense::Maximize => (highest, lowest),
        };
        let mean_evaluations = rows.iter().map(|r| r.evaluations as f64).sum::<f64>() / runs as f64;
        let best_feasible_cost = rows
            .iter()
            .filter(|r| r.feasible == Some(true))
            .filter_map(|r| r.cost)
            .min_by(f64::total_cmp);
        let capture = rows[0].peak_hits.as_ref().map(|first| {
            let mut runs_occupied = vec![0u64; first.len()];
            let mut all_occupied_runs = 0;
            for r in rows {
                let hits = r.peak_hits.as_deref().unwrap_or_default();
                for (slot, &h) in runs_occupied.iter_mut().zip(hits) {
                    *slot += u64::from(h > 0);
                }
                all_occupied_runs += u64::from(r.all_peaks_occupied() == Some(true));
            }
            CaptureSummary {
                runs_occupied,
                all_occupied_runs,
                all_occupied_fraction: all_occupied_runs as f64 / runs as f64,
            }
        });
        Aggregates {
            runs,
            successes,
            success_rate: successes as f64 / runs as f64,
            best_value,
            median_value,
            worst_value,
            mean_evaluations,
            best_feasible_cost,
            capture,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentReport {
    pub config: ExperimentConfig,
    /// Sorted by replicate index.
    pub rows: Vec<ReplicateRow>,
    pub aggregates: Aggregates,
}

/// Full output of one replicate.
#[derive(Debug, Clone, PartialEq)]
pub struct ReplicateOutcome {
    pub row: ReplicateRow,
    /// Engine result; `None` for the hill climber.
    pub run: Option<RunResult>,
    pub vessel: Option<VesselReport>,
}

/// Replicate `k`: its stream is `child(base_seed, k)`, whose first word is
/// the engine seed. Realizations and hill-climber starts draw from the
/// same stream afterwards.
pub fn run_replicate(config: &ExperimentConfig, k: u64) -> Result<ReplicateOutcome> {
    let target = config.target()?;
    let mut stream = RandomSource::child(config.base_seed, k);
    let seed = stream.next_u64();
    let params = FaParams {
        seed,
        ..config.params.clone()
    };
    let sense = config.sense();
    let nominal = (params.population * params.max_iterations) as u64;

    match (&target, &config.algorithm) {
        (Target::Vessel, _) => {
            let sol = constrained::solve_vessel(&params, config.penalty, config.snap_thickness)?;
            let judged = sol.snapped.clone().unwrap_or_else(|| sol.report.clone());
            let feasible = judged.feasibility.feasible;
            let success =
                config
                    .success
                    .check(sense, judged.cost, &judged.position, None, Some(feasible))?;
            let peak_hits = capture_hits(config, &sol.run)?;
            Ok(ReplicateOutcome {
                row: ReplicateRow {
                    replicate: k,
                    seed,
                    best_value: sol.run.best_value,
                    best_position: sol.run.best_position.clone(),
                    evaluations: sol.run.evaluations,
                    nominal_evaluations: nominal,
                    success,
                    cost: Some(judged.cost),
                    feasible: Some(feasible),
                    peak_hits,
                },
                run: Some(sol.run),
                vessel: Some(judged),
            })
        }
        (Target::Function(f), Algorithm::Firefly) => {
            let objective = f.objective(config.realization, &mut stream);
            let run = firefly::run(objective, &params)?;
            let success = config.success.check(
                sense,
                run.best_value,
                &run.best_position,
                f.known_optimum.as_ref(),
                None,
            )?;
            let peak_hits = capture_hits(config, &run)?;
            Ok(ReplicateOutcome {
                row: ReplicateRow {
                    replicate: k,
                    seed,
                    best_value: run.best_value,
                    best_position: run.best_position.clone(),
                    evaluations: run.evaluations,
                    nominal_evaluations: nominal,
                    success,
                    cost: None,
                    feasible: None,
                    peak_hits,
                },
                run: Some(run),
                vessel: None,
            })
        }
        (Target::Function(f), Algorithm::HillClimb(hp)) => {
            let objective = f.objective(config.realization, &mut stream);
            let start: RealVector = f
                .bounds
                .lower()
                .iter()
                .zip(f.bounds.upper().iter())
                .map(|(&lo, &hi)| stream.uniform_in(lo, hi))
                .collect();
            let r = hill_climb(objective, start, f.sense, hp)?;
            let success = config.success.check(
                f.sense,
                r.best_value,
                &r.best_position,
                f.known_optimum.as_ref(),
                None,
            )?;
            Ok(ReplicateOutcome {
                row: ReplicateRow {
                    replicate: k,
                    seed,
                    best_value: r.best_value,
                    best_position: r.best_position,
                    evaluations: r.evaluations,
                    nominal_evaluations: hp.max_evaluations,
                    success,
                    cost: None,
                    feasible: None,
                    peak_hits: None,
                },
                run: None,
                vessel: None,
            })
        }
    }
}

fn capture_hits(config: &ExperimentConfig, run: &RunResult) -> Result<Option<Vec<u64>>> {
    let Some(spec) = &config.capture else {
        return Ok(None);
    };
    let mut hits = Vec::with_capacity(spec.peaks.len());
    for peak in &spec.peaks {
        let mut count = 0;
        for x in run.final_positions() {
            if distance(x, peak)? <= spec.radius {
                count += 1;
            }
        }
        hits.push(count);
    }
    Ok(Some(hits))
}

/// Runs all replicates on the global rayon pool.
pub fn run_experiment(config: &ExperimentConfig) -> Result<ExperimentReport> {
    config.validate()?;
    let rows = (0..config.replicates as u64)
        .into_par_iter()
        .map(|k| run_replicate(config, k).map(|o| o.row))
        .collect::<Result<Vec<_>>>()?;
    let aggregates = Aggregates::from_rows(&rows, config.sense());
    Ok(ExperimentReport {
        config: config.clone(),
        rows,
        aggregates,
    })
}

/// [`run_experiment`] on a dedicated pool of `threads` workers.
pub fn run_experiment_with_threads(
    config: &ExperimentConfig,
    threads: usize,
) -> Result<ExperimentReport> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .map_err(|e| Error::config(format!("thread pool: {e}")))?;
    pool.install(|| run_experiment(config))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CaptureReport {
    /// `hits[k][p]`: members of run k's final population near peak p.
    pub hits: Vec<Vec<u64>>,
    pub summary: CaptureSummary,
}

/// Runs the experiment with `peaks` and `radius` as its capture spec.
pub fn multimodal_capture(
    config: &ExperimentConfig,
    peaks: Vec<RealVector>,
    radius: f64,
) -> Result<CaptureReport> {
    let config = config.clone().with_capture(peaks, radius);
    let report = run_experiment(&config)?;
    let hits = report
        .rows
        .into_iter()
        .map(|r| r.peak_hits.expect("capture spec set"))
        .collect();
    Ok(CaptureReport {
        hits,
        summary: report.aggregates.capture.expect("capture spec set"),
    })
}

impl ExperimentReport {
    pub fn sense(&self) -> Sense {
        self.config.sense()
    }

    pub fn to_json(&self) -> Result<String> {
        output::to_json(self)
    }

    /// One line per replicate; aggregates are left to the reader.
    pub fn to_csv(&self) -> Result<String> {
        let d = self
            .rows
            .first()
            .map_or(self.config.dim, |r| r.best_position.dim());
        let peaks = self.config.capture.as_ref().map_or(0, |c| c.peaks.len());
        let mut header: Vec<String> = [
            "replicate",
            "seed",
            "best_value",
            "evaluations",
            "nominal_evaluations",
            "success",
            "cost",
            "feasible",
        ]
        .map(String::from)
        .to_vec();
        header.extend((1..=d).map(|i| format!("x{i}")));
        header.extend((1..=peaks).map(|p| format!("peak{p}_hits")));

        let opt = |v: Option<String>| v.unwrap_or_default();
        let rows: Vec<Vec<String>> = self
            .rows
            .iter()
            .map(|r| {
                let mut cells = vec![
                    r.replicate.to_string(),
                    r.seed.to_string(),
                    format_float(r.best_value),
                    r.evaluations.to_string(),
                    r.nominal_evaluations.to_string(),
                    r.success.to_string(),
                    opt(r.cost.map(format_float)),
                    opt(r.feasible.map(|f| f.to_string())),
                ];
                cells.extend(r.best_position.iter().map(|&v| format_float(v)));
                if let Some(h) = &r.peak_hits {
                    cells.extend(h.iter().map(u64::to_string));
                }
                cells
            })
            .collect();
        output::to_csv(&header, &rows)
    }

    /// Serializes in the configured format.
    pub fn render(&self) -> Result<String> {
        match self.config.format {
            OutputFormat::Json => self.to_json(),
            OutputFormat::Csv => self.to_csv(),
        }
    }
}
