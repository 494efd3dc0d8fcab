//! Finitely supported probability measures on the circle.

use crate::circle::CirclePoint;
use crate::error::{CotError, Result};
use crate::step_function::StepFunction;

const WEIGHT_SUM_TOL: f64 = 1e-12;

/// A probability measure with finitely many atoms on `[0, 1)`.
///
/// Atoms are kept sorted by position; duplicate positions are merged by
/// summing their weights, and weights always sum to 1.
#[derive(Debug, Clone, PartialEq)]
pub struct DiscreteCircularMeasure {
    positions: Vec<f64>,
    weights: Vec<f64>,
}

impl DiscreteCircularMeasure {
    /// Empirical measure of a sample: weight `1/n` on every observation.
    pub fn from_points(points: &[CirclePoint]) -> Result<Self> {
        if points.is_empty() {
            return Err(CotError::EmptySample);
        }
        let w = 1.0 / points.len() as f64;
        Self::build(points.iter().map(|p| (p.value(), w)).collect())
    }

    /// Measure with explicit weights, which must be positive and sum to 1.
    pub fn from_weighted(atoms: &[(CirclePoint, f64)]) -> Result<Self> {
        if atoms.is_empty() {
            return Err(CotError::EmptySample);
        }
        for &(_, w) in atoms {
            if !(w > 0.0) || !w.is_finite() {
                return Err(CotError::InvalidMeasure(format!(
                    "weights must be positive and finite, got {w}"
                )));
            }
        }
        let total: f64 = atoms.iter().map(|&(_, w)| w).sum();
        if (total - 1.0).abs() > WEIGHT_SUM_TOL {
            return Err(CotError::InvalidMeasure(format!(
                "weights must sum to 1, got {total}"
            )));
        }
        Self::build(atoms.iter().map(|&(p, w)| (p.value(), w)).collect())
    }

    /// Point mass at `p`.
    pub fn dirac(p: CirclePoint) -> Self {
        DiscreteCircularMeasure {
            positions: vec![p.value()],
            weights: vec![1.0],
        }
    }

    fn build(mut atoms: Vec<(f64, f64)>) -> Result<Self> {
        atoms.sort_by(|a, b| a.0.total_cmp(&b.0));
        let mut positions: Vec<f64> = Vec::with_capacity(atoms.len());
        let mut weights: Vec<f64> = Vec::with_capacity(atoms.len());
        for (p, w) in atoms {
            if positions.last() == Some(&p) {
                *weights.last_mut().unwrap() += w;
            } else {
                positions.push(p);
                weights.push(w);
            }
        }
        Ok(DiscreteCircularMeasure { positions, weights })
    }

    pub fn len(&self) -> usize {
        self.positions.len()
    }

    pub fn is_empty(&self) -> bool {
        false // construction guarantees at least one atom
    }

    pub fn positions(&self) -> &[f64] {
        &self.positions
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    /// Mass of the closed interval `[0, t]`.
    ///
    /// The interval includes both endpoints, so an atom at exactly 0
    /// contributes to the value everywhere.
    pub fn cdf_at(&self, t: f64) -> f64 {
        let idx = self.positions.partition_point(|&p| p <= t);
        self.weights[..idx].iter().sum()
    }

    /// The distribution function `t -> mass of [0, t]` as a step function.
    pub fn cdf(&self) -> StepFunction {
        let mut bps = Vec::with_capacity(self.positions.len() + 1);
        let mut vals = Vec::with_capacity(self.positions.len() + 1);
        if self.positions[0] != 0.0 {
            bps.push(0.0);
            vals.push(0.0);
        }
        let mut cum = 0.0;
        for (p, w) in self.positions.iter().zip(&self.weights) {
            cum += w;
            bps.push(*p);
            vals.push(cum);
        }
        StepFunction::new(bps, vals)
            .expect("sorted distinct atom positions form a valid step function")
    }

    /// New measure with every atom shifted by `s` along the circle.
    pub fn rotate(&self, s: f64) -> Self {
        let atoms: Vec<(CirclePoint, f64)> = self
            .positions
            .iter()
            .zip(&self.weights)
            .map(|(&p, &w)| (CirclePoint::new(p + s), w))
            .collect();
        Self::build(atoms.iter().map(|&(p, w)| (p.value(), w)).collect())
            .expect("rotation preserves validity")
    }
}
