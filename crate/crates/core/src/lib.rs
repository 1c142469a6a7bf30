//! Firefly algorithm with a suite of deterministic, singular and stochastic
//! test functions, a static-penalty constrained layer with the pressure
//! vessel design problem, and a seeded replicate harness.
//!
//! ```
//! use firefly_core::testfns::registry;
//! use firefly_core::{run, FaParams};
//!
//! let f = registry("four_peak", 2)?;
//! let params = FaParams::default()
//!     .with_population(25)
//!     .with_max_iterations(20)
//!     .with_gamma(0.1)
//!     .with_sense(f.sense)
//!     .with_scales(f.bounds.widths())
//!     .with_seed(7);
//! let result = run(f.deterministic()?, &params)?;
//! assert!(result.best_value > 0.5);
//! # Ok::<(), firefly_core::Error>(())
//! ```

pub mod constrained;
pub mod error;
pub mod firefly;
pub mod harness;
pub mod objective;
pub mod rng;
pub mod testfns;
pub mod vector;

pub use error::{Error, Result};
pub use firefly::{
    run, run_from, FaParams, FireflyState, Noise, RunResult, Swarm, Topology, TraceRecord,
};
pub use harness::{run_experiment, ExperimentConfig, ExperimentReport};
pub use objective::{Counted, FnObjective, Objective, Sense};
pub use rng::RandomSource;
pub use vector::{clamp, distance, Bounds, RealVector};
