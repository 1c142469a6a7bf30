//! Function values on a regular 2-D grid, for external plotting.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::harness::output;
use crate::objective::Objective;
use crate::rng::RandomSource;
use crate::testfns::{registry, RealizationPolicy};
use crate::vector::{Bounds, RealVector};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LandscapeConfig {
    pub function: String,
    pub dim: usize,
    /// Points per axis.
    pub resolution: usize,
    /// Seeds the frozen realization of stochastic functions.
    pub seed: u64,
    /// Plotting window on the two varied axes; the function's box by
    /// default.
    pub window: Option<Bounds>,
    /// The two coordinates that vary.
    pub axes: [usize; 2],
    /// Values of the remaining coordinates when `dim > 2`; the box centre
    /// by default.
    pub base: Option<RealVector>,
}

impl LandscapeConfig {
    pub fn new(function: impl Into<String>, resolution: usize, seed: u64) -> Self {
        LandscapeConfig {
            function: function.into(),
            dim: 2,
            resolution,
            seed,
            window: None,
            axes: [0, 1],
            base: None,
        }
    }

    pub fn with_window(mut self, window: Bounds) -> Self {
        self.window = Some(window);
        self
    }

    /// A 2-D slice through `base` along `axes`.
    pub fn with_slice(mut self, base: impl Into<RealVector>, axes: [usize; 2]) -> Self {
        let base = base.into();
        self.dim = base.dim();
        self.base = Some(base);
        self.axes = axes;
        self
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GridPoint {
    pub x: f64,
    pub y: f64,
    pub f: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LandscapeSummary {
    pub min: GridPoint,
    pub max: GridPoint,
    pub points: usize,
    /// Seed of the frozen realization, for stochastic functions.
    pub realization_seed: Option<u64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Landscape {
    pub config: LandscapeConfig,
    /// Row-major: `y` is the slow index.
    pub rows: Vec<GridPoint>,
    pub aggregates: LandscapeSummary,
}

/// Evaluates the configured function on a `resolution × resolution` grid.
pub fn landscape_grid(config: &LandscapeConfig) -> Result<Landscape> {
    let function = registry(&config.function, config.dim)?;
    if config.resolution < 2 {
        return Err(Error::config(format!(
            "resolution must be >= 2 per axis, got {}",
            config.resolution
        )));
    }
    let [ax, ay] = config.axes;
    if ax == ay || ax >= config.dim || ay >= config.dim {
        return Err(Error::config(format!(
            "slice axes {:?} invalid for d = {}",
            config.axes, config.dim
        )));
    }
    let base = match &config.base {
        Some(b) => {
            Error::check_dim(config.dim, b.dim())?;
            b.clone()
        }
        None => function
            .bounds
            .lower()
            .iter()
            .zip(function.bounds.upper().iter())
            .map(|(lo, hi)| 0.5 * (lo + hi))
            .collect(),
    };
    let window = match &config.window {
        Some(w) => {
            Error::check_dim(2, w.dim())?;
            w.clone()
        }
        None => {
            let b = &function.bounds;
            Bounds::new(
                vec![b.lower()[ax], b.lower()[ay]],
                vec![b.upper()[ax], b.upper()[ay]],
            )?
        }
    };

    let mut rng = RandomSource::new(config.seed);
    let mut objective = function.objective(RealizationPolicy::Frozen, &mut rng);
    let n = config.resolution;
    let coord = |axis: usize, i: usize| {
        let (lo, hi) = (window.lower()[axis], window.upper()[axis]);
        if i == n - 1 {
            hi
        } else {
            lo + (hi - lo) * i as f64 / (n - 1) as f64
        }
    };

    let mut rows = Vec::with_capacity(n * n);
    let mut x = base;
    for iy in 0..n {
        for ix in 0..n {
            x[ax] = coord(0, ix);
            x[ay] = coord(1, iy);
            let f = objective.evaluate(&x)?;
            rows.push(GridPoint {
                x: x[ax],
                y: x[ay],
                f,
            });
        }
    }
    let aggregates = summarize(&rows, function.stochastic.then_some(config.seed));
    Ok(Landscape {
        config: config.clone(),
        rows,
        aggregates,
    })
}

/// Extremes over the grid; ties keep the first point in row-major order.
pub fn summarize(rows: &[GridPoint], realization_seed: Option<u64>) -> LandscapeSummary {
    let mut min = rows[0];
    let mut max = rows[0];
    for p in &rows[1..] {
        if p.f < min.f {
            min = *p;
        }
        if p.f > max.f {
            max = *p;
        }
    }
    LandscapeSummary {
        min,
        max,
        points: rows.len(),
        realization_seed,
    }
}

impl Landscape {
    pub fn to_json(&self) -> Result<String> {
        output::to_json(self)
    }

    pub fn to_csv(&self) -> Result<String> {
        let header = ["x", "y", "f"].map(String::from);
        let rows: Vec<Vec<String>> = self
            .rows
            .iter()
            .map(|p| {
                vec![
                    output::format_float(p.x),
                    output::format_float(p.y),
                    output::format_float(p.f),
                ]
            })
            .collect();
        output::to_csv(&header, &rows)
    }
}
