//! The experiments behind the paper's qualitative claims. Step sizes and
//! absorption were tuned on seeds disjoint from any base seed used in
//! tests; every experiment scales its noise by the box width.

use crate::error::{Error, Result};
use crate::firefly::{FaParams, Noise};
use crate::harness::{Algorithm, ExperimentConfig, HillClimbParams, SuccessPredicate, VESSEL};
use crate::testfns::{registry, RealizationPolicy};
use crate::vector::RealVector;

pub const PAPER_EXPERIMENTS: [&str; 5] = [
    "four_peak",
    "standing_wave",
    "stochastic_grid",
    "stochastic_grid_hill_climb",
    "vessel",
];

fn tuned(
    target: &str,
    dim: usize,
    noise: Noise,
    alpha: f64,
    gamma: f64,
    m: f64,
    decay: f64,
) -> Result<FaParams> {
    let widths = if target == VESSEL {
        crate::constrained::vessel_problem().bounds().widths()
    } else {
        registry(target, dim)?.bounds.widths()
    };
    Ok(FaParams::default()
        .with_noise(noise)
        .with_alpha(alpha)
        .with_gamma(gamma)
        .with_distance_exponent(m)
        .with_alpha_decay(decay)
        .with_scales(widths))
}

/// One named experiment of the suite.
pub fn paper_experiment(name: &str, replicates: usize, base_seed: u64) -> Result<ExperimentConfig> {
    let config = match name {
        "four_peak" => {
            let params = tuned("four_peak", 2, Noise::UniformCentered, 0.15, 0.1, 2.0, 0.99)?
                .with_population(25)
                .with_max_iterations(20);
            let peaks = [[0.5, 0.5], [-0.5, 0.5], [-0.5, -0.5], [0.5, -0.5]]
                .map(RealVector::from)
                .to_vec();
            ExperimentConfig::new("four_peak", 2, params)
                .with_success(SuccessPredicate::value(0.60))
                .with_capture(peaks, 0.2)
        }
        "standing_wave" => {
            let params = tuned(
                "standing_wave",
                2,
                Noise::UniformCentered,
                0.02,
                0.5,
                0.5,
                0.95,
            )?
            .with_population(20)
            .with_max_iterations(15);
            ExperimentConfig::new("standing_wave", 2, params)
                .with_success(SuccessPredicate::value(-0.95))
        }
        "stochastic_grid" => {
            let params = tuned("stochastic_grid", 2, Noise::Gaussian, 0.2, 1.0, 2.0, 0.9)?
                .with_population(20)
                .with_max_iterations(15);
            ExperimentConfig::new("stochastic_grid", 2, params)
                .with_realization(RealizationPolicy::Frozen)
                .with_success(SuccessPredicate::position(0.3))
        }
        "stochastic_grid_hill_climb" => {
            ExperimentConfig::new("stochastic_grid", 2, FaParams::default())
                .with_algorithm(Algorithm::HillClimb(HillClimbParams {
                    // half the spacing between wells: a local climber
                    initial_step: 0.05,
                    ..Default::default()
                }))
                .with_realization(RealizationPolicy::ResamplePerEvaluation)
                .with_success(SuccessPredicate::position(0.3))
        }
        "vessel" => {
            let params = tuned(VESSEL, 4, Noise::Gaussian, 0.1, 1e-4, 2.0, 0.9)?
                .with_population(40)
                .with_max_iterations(20);
            ExperimentConfig::new(VESSEL, 4, params)
                .with_success(SuccessPredicate::feasible_below(6090.0))
        }
        other => {
            return Err(Error::Lookup {
                name: other.to_string(),
                valid: PAPER_EXPERIMENTS.iter().map(|s| s.to_string()).collect(),
            })
        }
    };
    Ok(config
        .with_name(name)
        .with_replicates(replicates)
        .with_base_seed(base_seed))
}

/// All experiments, in [`PAPER_EXPERIMENTS`] order.
pub fn paper_suite(replicates: usize, base_seed: u64) -> Result<Vec<ExperimentConfig>> {
    PAPER_EXPERIMENTS
        .iter()
        .map(|name| paper_experiment(name, replicates, base_seed))
        .collect()
}
