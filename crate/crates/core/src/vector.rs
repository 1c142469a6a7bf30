//! Real vectors, box bounds and the two geometric primitives the engine
//! needs: Euclidean distance and projection onto the box.

use std::ops::{Deref, DerefMut};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A point in problem coordinates.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct RealVector(Vec<f64>);

impl RealVector {
    pub fn new(components: Vec<f64>) -> Self {
        RealVector(components)
    }

    pub fn zeros(d: usize) -> Self {
        RealVector(vec![0.0; d])
    }

    pub fn filled(d: usize, value: f64) -> Self {
        RealVector(vec![value; d])
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }

    pub fn into_inner(self) -> Vec<f64> {
        self.0
    }

    pub fn is_finite(&self) -> bool {
        self.0.iter().all(|v| v.is_finite())
    }
}

impl Deref for RealVector {
    type Target = [f64];

    fn deref(&self) -> &[f64] {
        &self.0
    }
}

impl DerefMut for RealVector {
    fn deref_mut(&mut self) -> &mut [f64] {
        &mut self.0
    }
}

impl From<Vec<f64>> for RealVector {
    fn from(v: Vec<f64>) -> Self {
        RealVector(v)
    }
}

impl From<&[f64]> for RealVector {
    fn from(v: &[f64]) -> Self {
        RealVector(v.to_vec())
    }
}

impl<const N: usize> From<[f64; N]> for RealVector {
    fn from(v: [f64; N]) -> Self {
        RealVector(v.to_vec())
    }
}

impl FromIterator<f64> for RealVector {
    fn from_iter<I: IntoIterator<Item = f64>>(iter: I) -> Self {
        RealVector(iter.into_iter().collect())
    }
}

/// Per-dimension box constraints, `lower[k] < upper[k]`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Bounds {
    lower: RealVector,
    upper: RealVector,
}

impl Bounds {
    pub fn new(lower: impl Into<RealVector>, upper: impl Into<RealVector>) -> Result<Self> {
        let lower = lower.into();
        let upper = upper.into();
        Error::check_dim(lower.dim(), upper.dim())?;
        if lower.dim() == 0 {
            return Err(Error::config("bounds must have at least one dimension"));
        }
        for (k, (lo, hi)) in lower.iter().zip(upper.iter()).enumerate() {
            if !(lo.is_finite() && hi.is_finite() && lo < hi) {
                return Err(Error::config(format!(
                    "bounds[{k}]: need finite lower < upper, got [{lo}, {hi}]"
                )));
            }
        }
        Ok(Bounds { lower, upper })
    }

    /// The same interval `[lo, hi]` in each of `d` dimensions.
    pub fn uniform(d: usize, lo: f64, hi: f64) -> Result<Self> {
        Bounds::new(RealVector::filled(d, lo), RealVector::filled(d, hi))
    }

    pub fn dim(&self) -> usize {
        self.lower.dim()
    }

    pub fn lower(&self) -> &RealVector {
        &self.lower
    }

    pub fn upper(&self) -> &RealVector {
        &self.upper
    }

    /// `upper - lower` per dimension.
    pub fn widths(&self) -> RealVector {
        self.lower
            .iter()
            .zip(self.upper.iter())
            .map(|(lo, hi)| hi - lo)
            .collect()
    }

    pub fn contains(&self, x: &[f64]) -> bool {
        x.len() == self.dim()
            && x.iter()
                .zip(self.lower.iter().zip(self.upper.iter()))
                .all(|(v, (lo, hi))| *lo <= *v && *v <= *hi)
    }

    /// Shift both corners by `offset`.
    pub fn translated(&self, offset: &[f64]) -> Result<Self> {
        Error::check_dim(self.dim(), offset.len())?;
        let shift = |v: &RealVector| {
            v.iter()
                .zip(offset)
                .map(|(a, c)| a + c)
                .collect::<RealVector>()
        };
        Bounds::new(shift(&self.lower), shift(&self.upper))
    }
}

/// Euclidean distance between two points of equal dimension.
pub fn distance(a: &[f64], b: &[f64]) -> Result<f64> {
    Error::check_dim(a.len(), b.len())?;
    Ok(squared_distance(a, b).sqrt())
}

pub(crate) fn squared_distance(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum()
}

/// Component-wise projection of `x` onto `bounds`.
pub fn clamp(x: &[f64], bounds: &Bounds) -> Result<RealVector> {
    Error::check_dim(bounds.dim(), x.len())?;
    Ok(x.iter()
        .zip(bounds.lower.iter().zip(bounds.upper.iter()))
        .map(|(v, (lo, hi))| v.clamp(*lo, *hi))
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn distance_examples() {
        assert_eq!(distance(&[0.0, 0.0], &[3.0, 4.0]).unwrap(), 5.0);
        assert_eq!(distance(&[1.0, 1.0], &[1.0, 1.0]).unwrap(), 0.0);
        assert_eq!(distance(&[2.0], &[-1.0]).unwrap(), 3.0);
    }

    #[test]
    fn distance_rejects_mismatch() {
        assert_eq!(
            distance(&[1.0], &[1.0, 2.0]),
            Err(Error::Dimension {
                expected: 1,
                found: 2
            })
        );
    }

    #[test]
    fn clamp_examples() {
        let b = Bounds::uniform(2, -10.0, 10.0).unwrap();
        assert_eq!(
            clamp(&[12.0, -12.0], &b).unwrap().as_slice(),
            &[10.0, -10.0]
        );
        assert_eq!(clamp(&[1.5, -2.0], &b).unwrap().as_slice(), &[1.5, -2.0]);
        assert_eq!(clamp(&[10.0, 5.0], &b).unwrap().as_slice(), &[10.0, 5.0]);
        assert!(matches!(clamp(&[1.0], &b), Err(Error::Dimension { .. })));
    }

    #[test]
    fn bounds_validation() {
        assert!(Bounds::uniform(2, 1.0, 1.0).is_err());
        assert!(Bounds::uniform(0, 0.0, 1.0).is_err());
        assert!(Bounds::new(vec![0.0], vec![1.0, 2.0]).is_err());
        assert!(Bounds::new(vec![0.0], vec![f64::INFINITY]).is_err());
    }

    fn point(d: usize) -> impl Strategy<Value = Vec<f64>> {
        prop::collection::vec(-1e3..1e3f64, d)
    }

    proptest! {
        #[test]
        fn distance_is_a_metric((a, b, c) in (1usize..6).prop_flat_map(|d| (point(d), point(d), point(d)))) {
            let ab = distance(&a, &b).unwrap();
            let ba = distance(&b, &a).unwrap();
            let bc = distance(&b, &c).unwrap();
            let ac = distance(&a, &c).unwrap();
            prop_assert_eq!(ab, ba);
            prop_assert!(ac <= ab + bc + 1e-9 * (1.0 + ab + bc));
            prop_assert_eq!(distance(&a, &a).unwrap(), 0.0);
        }

        #[test]
        fn clamp_is_idempotent(x in prop::collection::vec(-50.0..50.0f64, 3)) {
            let b = Bounds::new(vec![-10.0, 0.0, 5.0], vec![10.0, 1.0, 6.0]).unwrap();
            let once = clamp(&x, &b).unwrap();
            prop_assert!(b.contains(&once));
            prop_assert_eq!(clamp(&once, &b).unwrap(), once);
        }
    }
}
