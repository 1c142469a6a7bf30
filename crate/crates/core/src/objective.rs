use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::vector::Bounds;

/// Optimization direction.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Sense {
    Minimize,
    Maximize,
}

impl Sense {
    /// True when `a` is strictly better than `b` under this sense.
    pub fn better(self, a: f64, b: f64) -> bool {
        match self {
            Sense::Minimize => a < b,
            Sense::Maximize => a > b,
        }
    }
}

/// A box-bounded black-box objective. The optimization direction lives in
/// the engine parameters, not here.
///
/// `evaluate` takes `&mut self` so stochastic objectives can draw fresh
/// coefficients on every call.
pub trait Objective {
    fn dim(&self) -> usize {
        self.bounds().dim()
    }

    fn bounds(&self) -> &Bounds;

    fn evaluate(&mut self, x: &[f64]) -> Result<f64>;
}

impl<O: Objective + ?Sized> Objective for &mut O {
    fn dim(&self) -> usize {
        (**self).dim()
    }

    fn bounds(&self) -> &Bounds {
        (**self).bounds()
    }

    fn evaluate(&mut self, x: &[f64]) -> Result<f64> {
        (**self).evaluate(x)
    }
}

impl<O: Objective + ?Sized> Objective for Box<O> {
    fn dim(&self) -> usize {
        (**self).dim()
    }

    fn bounds(&self) -> &Bounds {
        (**self).bounds()
    }

    fn evaluate(&mut self, x: &[f64]) -> Result<f64> {
        (**self).evaluate(x)
    }
}

/// Objective backed by a closure.
pub struct FnObjective<F> {
    bounds: Bounds,
    f: F,
}

impl<F> FnObjective<F>
where
    F: FnMut(&[f64]) -> f64,
{
    pub fn new(bounds: Bounds, f: F) -> Self {
        FnObjective { bounds, f }
    }
}

impl<F> Objective for FnObjective<F>
where
    F: FnMut(&[f64]) -> f64,
{
    fn bounds(&self) -> &Bounds {
        &self.bounds
    }

    fn evaluate(&mut self, x: &[f64]) -> Result<f64> {
        Error::check_dim(self.bounds.dim(), x.len())?;
        Ok((self.f)(x))
    }
}

/// Wraps an objective and counts calls to `evaluate`.
pub struct Counted<O> {
    inner: O,
    calls: u64,
}

impl<O: Objective> Counted<O> {
    pub fn new(inner: O) -> Self {
        Counted { inner, calls: 0 }
    }

    pub fn calls(&self) -> u64 {
        self.calls
    }

    pub fn into_inner(self) -> O {
        self.inner
    }
}

impl<O: Objective> Objective for Counted<O> {
    fn dim(&self) -> usize {
        self.inner.dim()
    }

    fn bounds(&self) -> &Bounds {
        self.inner.bounds()
    }

    fn evaluate(&mut self, x: &[f64]) -> Result<f64> {
        self.calls += 1;
        self.inner.evaluate(x)
    }
}
