//! A single seeded run on a registry function, reported as its trace.

use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::firefly::{self, FaParams, TraceRecord};
use crate::harness::output;
use crate::rng::RandomSource;
use crate::testfns::{registry, RealizationPolicy};
use crate::vector::RealVector;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunConfig {
    pub function: String,
    pub dim: usize,
    /// `sense` is taken from the function.
    pub params: FaParams,
    pub realization: RealizationPolicy,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunSummary {
    pub best_value: f64,
    pub best_position: RealVector,
    pub evaluations: u64,
    pub nominal_evaluations: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunReport {
    pub config: RunConfig,
    pub rows: Vec<TraceRecord>,
    pub aggregates: RunSummary,
}

/// Stochastic coefficients come from `child(seed, 0)` so they do not
/// share a stream with the engine.
pub fn run_function(config: &RunConfig) -> Result<RunReport> {
    let function = registry(&config.function, config.dim)?;
    let params = FaParams {
        sense: function.sense,
        ..config.params.clone()
    };
    let mut rng = RandomSource::child(params.seed, 0);
    let objective = function.objective(config.realization, &mut rng);
    let run = firefly::run(objective, &params)?;
    Ok(RunReport {
        config: RunConfig {
            params: params.clone(),
            ..config.clone()
        },
        aggregates: RunSummary {
            best_value: run.best_value,
            best_position: run.best_position,
            evaluations: run.evaluations,
            nominal_evaluations: (params.population * params.max_iterations) as u64,
        },
        rows: run.trace,
    })
}

impl RunReport {
    pub fn to_json(&self) -> Result<String> {
        output::to_json(self)
    }

    /// The trace only.
    pub fn to_csv(&self) -> Result<String> {
        let header = ["iteration", "best_so_far", "current_best", "alpha_used"].map(String::from);
        let rows: Vec<Vec<String>> = self
            .rows
            .iter()
            .map(|t| {
                vec![
                    t.iteration.to_string(),
                    output::format_float(t.best_so_far),
                    output::format_float(t.current_best),
                    output::format_float(t.alpha_used),
                ]
            })
            .collect();
        output::to_csv(&header, &rows)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::objective::Sense;

    #[test]
    fn trace_matches_run_and_round_trips() {
        let config = RunConfig {
            function: "four_peak".into(),
            dim: 2,
            params: FaParams::default()
                .with_population(8)
                .with_max_iterations(6)
                .with_seed(3),
            realization: RealizationPolicy::Frozen,
        };
        let r = run_function(&config).unwrap();
        assert_eq!(r.config.params.sense, Sense::Maximize);
        assert_eq!(r.rows.len(), 6);
        assert_eq!(r.rows.last().unwrap().best_so_far, r.aggregates.best_value);
        let back: RunReport = serde_json::from_str(&r.to_json().unwrap()).unwrap();
        assert_eq!(back, r);
        let csv = r.to_csv().unwrap();
        assert_eq!(csv.lines().count(), 7);
    }
}
