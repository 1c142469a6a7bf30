//! Inequality-constrained minimization by static penalty, and the pressure
//! vessel design problem.
//!
//! Constraints use the `g(x) <= 0` convention. Each constraint carries a
//! magnitude `scale` so feasibility tolerances can be relative:
//! constraint `i` is accepted when `g_i(x) <= tol * max(1, scale_i)`.

use std::f64::consts::PI;
use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::firefly::{self, FaParams, RunResult};
use crate::objective::{Objective, Sense};
use crate::vector::{Bounds, RealVector};

type Func = Arc<dyn Fn(&[f64]) -> f64 + Send + Sync>;

/// One inequality `g(x) <= 0`.
#[derive(Clone)]
pub struct Constraint {
    pub name: String,
    /// Typical magnitude of `g`, used to scale feasibility tolerances.
    pub scale: f64,
    g: Func,
}

impl Constraint {
    pub fn new(
        name: impl Into<String>,
        scale: f64,
        g: impl Fn(&[f64]) -> f64 + Send + Sync + 'static,
    ) -> Self {
        Constraint {
            name: name.into(),
            scale,
            g: Arc::new(g),
        }
    }

    pub fn eval(&self, x: &[f64]) -> f64 {
        (self.g)(x)
    }

    /// Tolerance for this constraint given a base tolerance.
    pub fn tolerance(&self, tol: f64) -> f64 {
        tol * self.scale.max(1.0)
    }
}

impl fmt::Debug for Constraint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Constraint")
            .field("name", &self.name)
            .field("scale", &self.scale)
            .finish_non_exhaustive()
    }
}

/// Objective, inequality constraints and box bounds.
#[derive(Clone)]
pub struct ConstrainedProblem {
    objective: Func,
    constraints: Vec<Constraint>,
    bounds: Bounds,
}

impl fmt::Debug for ConstrainedProblem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("ConstrainedProblem")
            .field("constraints", &self.constraints)
            .field("bounds", &self.bounds)
            .finish_non_exhaustive()
    }
}

impl ConstrainedProblem {
    pub fn new(
        bounds: Bounds,
        objective: impl Fn(&[f64]) -> f64 + Send + Sync + 'static,
        constraints: Vec<Constraint>,
    ) -> Self {
        ConstrainedProblem {
            objective: Arc::new(objective),
            constraints,
            bounds,
        }
    }

    pub fn dim(&self) -> usize {
        self.bounds.dim()
    }

    pub fn bounds(&self) -> &Bounds {
        &self.bounds
    }

    pub fn constraints(&self) -> &[Constraint] {
        &self.constraints
    }

    pub fn objective_value(&self, x: &[f64]) -> Result<f64> {
        Error::check_dim(self.dim(), x.len())?;
        Ok((self.objective)(x))
    }

    pub fn constraint_values(&self, x: &[f64]) -> Result<Vec<f64>> {
        Error::check_dim(self.dim(), x.len())?;
        Ok(self.constraints.iter().map(|c| c.eval(x)).collect())
    }
}

/// Static penalty `lambda * sum max(0, g_i)^p`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PenaltyParams {
    pub coefficient: f64,
    pub exponent: f64,
}

impl Default for PenaltyParams {
    fn default() -> Self {
        PenaltyParams {
            coefficient: 1e6,
            exponent: 2.0,
        }
    }
}

impl PenaltyParams {
    pub fn new(coefficient: f64, exponent: f64) -> Result<Self> {
        let p = PenaltyParams {
            coefficient,
            exponent,
        };
        p.validate()?;
        Ok(p)
    }

    /// `coefficient = 0` is allowed: it switches the penalty off.
    pub fn validate(&self) -> Result<()> {
        if !(self.coefficient.is_finite() && self.coefficient >= 0.0) {
            return Err(Error::config(format!(
                "penalty coefficient must be >= 0, got {}",
                self.coefficient
            )));
        }
        if !(self.exponent.is_finite() && self.exponent >= 1.0) {
            return Err(Error::config(format!(
                "penalty exponent must be >= 1, got {}",
                self.exponent
            )));
        }
        Ok(())
    }

    fn penalty(&self, violations: impl Iterator<Item = f64>) -> f64 {
        let total: f64 = violations
            .filter(|g| *g > 0.0)
            .map(|g| {
                if self.exponent == 2.0 {
                    g * g
                } else {
                    g.powf(self.exponent)
                }
            })
            .sum();
        if total == 0.0 {
            0.0
        } else {
            self.coefficient * total
        }
    }
}

/// `f(x) + penalty(g(x))` as an unconstrained objective over the problem's
/// box. Equal to `f(x)` wherever every `g_i(x) <= 0`.
#[derive(Debug, Clone)]
pub struct Penalized {
    problem: ConstrainedProblem,
    penalty: PenaltyParams,
}

pub fn penalized(problem: ConstrainedProblem, penalty: PenaltyParams) -> Result<Penalized> {
    penalty.validate()?;
    Ok(Penalized { problem, penalty })
}

impl Penalized {
    pub fn problem(&self) -> &ConstrainedProblem {
        &self.problem
    }

    pub fn value(&self, x: &[f64]) -> Result<f64> {
        let f = self.problem.objective_value(x)?;
        let p = self
            .penalty
            .penalty(self.problem.constraints.iter().map(|c| c.eval(x)));
        Ok(f + p)
    }
}

impl Objective for Penalized {
    fn bounds(&self) -> &Bounds {
        self.problem.bounds()
    }

    fn evaluate(&mut self, x: &[f64]) -> Result<f64> {
        self.value(x)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FeasibilityReport {
    pub feasible: bool,
    pub within_bounds: bool,
    pub constraint_values: Vec<f64>,
    /// Index of the constraint with the largest scaled violation
    /// `g_i / max(1, scale_i)`; `None` when nothing is positive.
    pub worst: Option<usize>,
    /// Largest scaled violation, 0 when no constraint is positive.
    pub max_violation: f64,
}

/// Checks bounds and constraints with per-constraint relative tolerance.
pub fn is_feasible(problem: &ConstrainedProblem, x: &[f64], tol: f64) -> Result<FeasibilityReport> {
    if tol.is_nan() || tol < 0.0 {
        return Err(Error::config(format!("tolerance must be >= 0, got {tol}")));
    }
    let values = problem.constraint_values(x)?;
    let bounds = problem.bounds();
    let within_bounds = x
        .iter()
        .zip(bounds.lower().iter().zip(bounds.upper().iter()))
        .all(|(v, (lo, hi))| *v >= lo - tol && *v <= hi + tol);
    let satisfied = problem
        .constraints
        .iter()
        .zip(&values)
        .all(|(c, g)| *g <= c.tolerance(tol));
    let mut worst = None;
    let mut max_violation = 0.0;
    for (i, (c, g)) in problem.constraints.iter().zip(&values).enumerate() {
        let scaled = g / c.scale.max(1.0);
        if scaled > max_violation {
            max_violation = scaled;
            worst = Some(i);
        }
    }
    Ok(FeasibilityReport {
        feasible: within_bounds && satisfied,
        within_bounds,
        constraint_values: values,
        worst,
        max_violation,
    })
}

/// Thickness increment of the classical problem statement.
pub const THICKNESS_STEP: f64 = 0.0625;

/// Design cost; `x = (d1, d2, r, L)`.
pub fn vessel_objective(x: &[f64]) -> Result<f64> {
    Error::check_dim(4, x.len())?;
    Ok(vessel_cost(x))
}

fn vessel_cost(x: &[f64]) -> f64 {
    let (d1, d2, r, l) = (x[0], x[1], x[2], x[3]);
    0.6224 * d1 * r * l + 1.7781 * d2 * r * r + 3.1661 * d1 * d1 * l + 19.84 * d1 * d1 * r
}

/// `(g1, g2, g3, g4)` for `x = (d1, d2, r, L)`.
pub fn vessel_constraints(x: &[f64]) -> Result<RealVector> {
    Error::check_dim(4, x.len())?;
    Ok(RealVector::from([g1(x), g2(x), g3(x), g4(x)]))
}

fn g1(x: &[f64]) -> f64 {
    -x[0] + 0.0193 * x[2]
}

fn g2(x: &[f64]) -> f64 {
    -x[1] + 0.00954 * x[2]
}

fn g3(x: &[f64]) -> f64 {
    let (r, l) = (x[2], x[3]);
    -PI * r * r * l - (4.0 * PI / 3.0) * r * r * r + 1_296_000.0
}

fn g4(x: &[f64]) -> f64 {
    x[3] - 240.0
}

/// The four-variable pressure vessel problem with continuous thicknesses.
pub fn vessel_problem() -> ConstrainedProblem {
    let bounds = Bounds::new(
        vec![THICKNESS_STEP, THICKNESS_STEP, 10.0, 10.0],
        vec![99.0 * THICKNESS_STEP, 99.0 * THICKNESS_STEP, 200.0, 200.0],
    )
    .expect("static bounds are valid");
    ConstrainedProblem::new(
        bounds,
        vessel_cost,
        vec![
            Constraint::new("head thickness", 1.0, g1),
            Constraint::new("shell thickness", 1.0, g2),
            Constraint::new("volume", 1_296_000.0, g3),
            Constraint::new("length", 1.0, g4),
        ],
    )
}

/// Rounds `d1` and `d2` up to the next multiple of [`THICKNESS_STEP`]
/// (within the upper bound). Rounding up keeps `g1` and `g2` satisfied.
pub fn snap_thickness(x: &[f64]) -> Result<RealVector> {
    Error::check_dim(4, x.len())?;
    let mut out = RealVector::from(x);
    for v in out.iter_mut().take(2) {
        let steps = (*v / THICKNESS_STEP - 1e-9).ceil().clamp(1.0, 99.0);
        *v = steps * THICKNESS_STEP;
    }
    Ok(out)
}

/// Base feasibility tolerance used for vessel reports.
pub const VESSEL_TOLERANCE: f64 = 1e-3;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VesselReport {
    pub position: RealVector,
    pub cost: f64,
    pub feasibility: FeasibilityReport,
}

/// Re-evaluates cost and constraints at `x`.
pub fn vessel_report(x: &[f64], tol: f64) -> Result<VesselReport> {
    let problem = vessel_problem();
    Ok(VesselReport {
        position: RealVector::from(x),
        cost: vessel_objective(x)?,
        feasibility: is_feasible(&problem, x, tol)?,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VesselSolution {
    /// Run on the penalized objective; `best_value` includes the penalty.
    pub run: RunResult,
    pub report: VesselReport,
    /// Report after [`snap_thickness`], when requested.
    pub snapped: Option<VesselReport>,
}

/// Minimizes the penalized vessel cost. `params.sense` is forced to
/// minimization.
pub fn solve_vessel(
    params: &FaParams,
    penalty: PenaltyParams,
    snap: bool,
) -> Result<VesselSolution> {
    let objective = penalized(vessel_problem(), penalty)?;
    let params = FaParams {
        sense: Sense::Minimize,
        ..params.clone()
    };
    let run = firefly::run(objective, &params)?;
    let report = vessel_report(&run.best_position, VESSEL_TOLERANCE)?;
    let snapped = if snap {
        Some(vessel_report(
            &snap_thickness(&run.best_position)?,
            VESSEL_TOLERANCE,
        )?)
    } else {
        None
    };
    Ok(VesselSolution {
        run,
        report,
        snapped,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::RandomSource;
    use approx::assert_relative_eq;

    const CAGNINA: [f64; 4] = [0.8125, 0.4375, 42.0984, 176.6366];
    const FA_POINT: [f64; 4] = [0.7782, 0.3846, 40.3196, 200.0];

    #[test]
    fn cost_examples() {
        assert!((vessel_objective(&CAGNINA).unwrap() - 6059.714).abs() < 0.5);
        assert!((vessel_objective(&FA_POINT).unwrap() - 5885.33).abs() < 0.5);
        assert_eq!(vessel_objective(&[0.0, 0.0, 37.0, 150.0]).unwrap(), 0.0);
        assert!(matches!(
            vessel_objective(&[1.0, 2.0, 3.0]),
            Err(Error::Dimension { .. })
        ));
    }

    #[test]
    fn constraint_examples() {
        let g = vessel_constraints(&[1.0, 1.0, 10.0, 100.0]).unwrap();
        assert_relative_eq!(g[0], -0.807, max_relative = 1e-14);
        assert_eq!(g[3], -140.0);
        assert_eq!(
            vessel_constraints(&[1.0, 1.0, 50.0, 240.0]).unwrap()[3],
            0.0
        );
        assert!(matches!(
            vessel_constraints(&[1.0; 5]),
            Err(Error::Dimension { .. })
        ));
    }

    #[test]
    fn problem_shape() {
        let p = vessel_problem();
        assert_eq!(p.dim(), 4);
        assert_eq!(p.constraints().len(), 4);
        assert_eq!(p.bounds().lower().as_slice(), &[0.0625, 0.0625, 10.0, 10.0]);
        assert_eq!(
            p.bounds().upper().as_slice(),
            &[6.1875, 6.1875, 200.0, 200.0]
        );
    }

    #[test]
    fn penalty_examples() {
        let pen = penalized(vessel_problem(), PenaltyParams::new(1e6, 2.0).unwrap()).unwrap();
        // feasible: thick walls, big enough volume, short enough
        let x = [2.0, 2.0, 60.0, 150.0];
        assert!(vessel_constraints(&x).unwrap().iter().all(|g| *g <= 0.0));
        assert_eq!(pen.value(&x).unwrap(), vessel_objective(&x).unwrap());

        // only g4 violated, by exactly 10
        let x = [2.0, 2.0, 60.0, 250.0];
        let g = vessel_constraints(&x).unwrap();
        assert!(g[0] < 0.0 && g[1] < 0.0 && g[2] < 0.0);
        assert_eq!(g[3], 10.0);
        assert_eq!(pen.value(&x).unwrap(), vessel_objective(&x).unwrap() + 1e8);
    }

    #[test]
    fn penalty_params_validated() {
        assert!(PenaltyParams::new(-1.0, 2.0).is_err());
        assert!(PenaltyParams::new(1.0, 0.5).is_err());
        assert!(PenaltyParams::new(0.0, 1.0).is_ok());
    }

    #[test]
    fn penalized_dominates_objective() {
        let pen = penalized(vessel_problem(), PenaltyParams::default()).unwrap();
        let b = vessel_problem().bounds().clone();
        let mut rng = RandomSource::new(12);
        let mut feasible = 0;
        for _ in 0..10_000 {
            let x: Vec<f64> = (0..4)
                .map(|k| rng.uniform_in(b.lower()[k], b.upper()[k]))
                .collect();
            let f = vessel_objective(&x).unwrap();
            let p = pen.value(&x).unwrap();
            assert!(p >= f);
            if vessel_constraints(&x).unwrap().iter().all(|g| *g <= 0.0) {
                feasible += 1;
                assert_eq!(p, f);
            }
        }
        assert!(feasible > 100, "only {feasible} feasible samples");
    }

    #[test]
    fn feasibility_examples() {
        let p = vessel_problem();
        assert!(is_feasible(&p, &CAGNINA, 1e-2).unwrap().feasible);

        let corner = [0.0625, 0.0625, 200.0, 200.0];
        let rep = is_feasible(&p, &corner, 0.0).unwrap();
        assert!(!rep.feasible);
        assert!(rep.within_bounds);
        assert!(rep.constraint_values[0] > 0.0);
        assert_relative_eq!(
            rep.constraint_values[0],
            -0.0625 + 3.86,
            max_relative = 1e-14
        );
        assert_eq!(rep.worst, Some(0));

        assert!(is_feasible(&p, &corner, f64::INFINITY).unwrap().feasible);
        assert!(
            !is_feasible(&p, &[0.0, 0.0625, 20.0, 20.0], 0.0)
                .unwrap()
                .feasible
        );
        assert!(is_feasible(&p, &corner, -1.0).is_err());
    }

    #[test]
    fn snapping_rounds_up_to_step() {
        let s = snap_thickness(&FA_POINT).unwrap();
        assert_eq!(s.as_slice(), &[0.8125, 0.4375, 40.3196, 200.0]);
        let s = snap_thickness(&[0.8125, 0.0001, 10.0, 10.0]).unwrap();
        assert_eq!(&s[..2], &[0.8125, 0.0625]);
    }

    #[test]
    fn cost_increases_with_thickness() {
        let mut rng = RandomSource::new(4);
        let h = 1e-6;
        for _ in 0..1000 {
            let x = [
                rng.uniform_in(0.0625, 6.1875),
                rng.uniform_in(0.0625, 6.1875),
                rng.uniform_in(10.0, 200.0),
                rng.uniform_in(10.0, 200.0),
            ];
            let f = vessel_objective(&x).unwrap();
            for k in 0..2 {
                let mut y = x;
                y[k] += h;
                assert!((vessel_objective(&y).unwrap() - f) / h > 0.0);
            }
        }
    }
}
