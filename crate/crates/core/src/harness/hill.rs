//! Deterministic compass-search hill climber, used as a baseline.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::objective::{Objective, Sense};
use crate::vector::{clamp, RealVector};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HillClimbParams {
    /// Initial step as a fraction of each box width.
    pub initial_step: f64,
    /// Stops once the step fraction drops below this.
    pub min_step: f64,
    pub max_evaluations: u64,
}

impl Default for HillClimbParams {
    fn default() -> Self {
        HillClimbParams {
            initial_step: 0.1,
            min_step: 1e-6,
            max_evaluations: 300,
        }
    }
}

impl HillClimbParams {
    pub fn validate(&self) -> Result<()> {
        if !(self.initial_step > 0.0 && self.initial_step.is_finite()) {
            return Err(Error::config("hill-climb initial step must be positive"));
        }
        if !(self.min_step > 0.0 && self.min_step <= self.initial_step) {
            return Err(Error::config(
                "hill-climb min step must be in (0, initial step]",
            ));
        }
        if self.max_evaluations == 0 {
            return Err(Error::config("hill-climb budget must be >= 1"));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct HillClimbResult {
    pub best_position: RealVector,
    pub best_value: f64,
    pub evaluations: u64,
}

/// Polls `x ± step·width` along each axis in order and moves to the first
/// strictly better point; halves the step after a full unsuccessful poll.
/// The incumbent value is never re-evaluated, so under a resampled
/// objective the climber trusts whatever it saw when it moved.
pub fn hill_climb<O: Objective>(
    mut objective: O,
    start: RealVector,
    sense: Sense,
    params: &HillClimbParams,
) -> Result<HillClimbResult> {
    params.validate()?;
    let bounds = objective.bounds().clone();
    let widths = bounds.widths();
    let mut x = clamp(&start, &bounds)?;
    let mut fx = objective.evaluate(&x)?;
    let mut evaluations = 1u64;
    let mut step = params.initial_step;

    'outer: while step >= params.min_step {
        let mut improved = false;
        for k in 0..x.dim() {
            for dir in [1.0, -1.0] {
                if evaluations >= params.max_evaluations {
                    break 'outer;
                }
                let mut y = x.clone();
                y[k] += dir * step * widths[k];
                let y = clamp(&y, &bounds)?;
                if y == x {
                    continue;
                }
                let fy = objective.evaluate(&y)?;
                evaluations += 1;
                if sense.better(fy, fx) {
                    x = y;
                    fx = fy;
                    improved = true;
                    break;
                }
            }
        }
        if !improved {
            step *= 0.5;
        }
    }
    Ok(HillClimbResult {
        best_position: x,
        best_value: fx,
        evaluations,
    })
}
