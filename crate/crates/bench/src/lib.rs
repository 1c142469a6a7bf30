//! Workloads shared by the benchmarks.

use firefly_core::testfns::{registry, RealizationPolicy, TestObjective};
use firefly_core::{FaParams, RandomSource};

/// A registry function in `d` dimensions with a realization frozen from `seed`.
pub fn objective(name: &str, d: usize, seed: u64) -> TestObjective {
    let f = registry(name, d).expect("registry name");
    f.objective(RealizationPolicy::Frozen, &mut RandomSource::new(seed))
}

/// `n` fireflies for `iters` generations, noise scaled to the box.
pub fn params(name: &str, d: usize, n: usize, iters: usize) -> FaParams {
    let f = registry(name, d).expect("registry name");
    FaParams::default()
        .with_population(n)
        .with_max_iterations(iters)
        .with_gamma(0.1)
        .with_alpha_decay(0.95)
        .with_sense(f.sense)
        .with_scales(f.bounds.widths())
}
