//! Right-continuous step functions on the circle `[0, 1)`.

use crate::error::{CotError, Result};

/// A piecewise-constant function on `[0, 1)`.
///
/// Breakpoints are strictly increasing, always start at 0, and each carries
/// the value taken on the segment from that breakpoint to the next (the last
/// segment wraps up to 1). Adjacent segments with exactly equal values are
/// merged on construction, so the representation is canonical.
#[derive(Debug, Clone, PartialEq)]
pub struct StepFunction {
    breakpoints: Vec<f64>,
    values: Vec<f64>,
}

impl StepFunction {
    pub fn new(breakpoints: Vec<f64>, values: Vec<f64>) -> Result<Self> {
        if breakpoints.is_empty() || breakpoints.len() != values.len() {
            return Err(CotError::InvalidStepFunction(format!(
                "need equal, nonzero counts of breakpoints and values, got {} and {}",
                breakpoints.len(),
                values.len()
            )));
        }
        if breakpoints[0] != 0.0 {
            return Err(CotError::InvalidStepFunction(format!(
                "first breakpoint must be 0, got {}",
                breakpoints[0]
            )));
        }
        for w in breakpoints.windows(2) {
            if !(w[1] > w[0]) {
                return Err(CotError::InvalidStepFunction(format!(
                    "breakpoints must increase strictly, got {} then {}",
                    w[0], w[1]
                )));
            }
        }
        if *breakpoints.last().unwrap() >= 1.0 {
            return Err(CotError::InvalidStepFunction(
                "breakpoints must stay below 1".into(),
            ));
        }
        if values.iter().any(|v| !v.is_finite()) {
            return Err(CotError::InvalidStepFunction(
                "values must be finite".into(),
            ));
        }
        let mut f = StepFunction {
            breakpoints,
            values,
        };
        f.merge_equal_neighbors();
        Ok(f)
    }

    /// The constant function with the given value.
    pub fn constant(value: f64) -> Self {
        StepFunction {
            breakpoints: vec![0.0],
            values: vec![value],
        }
    }

    fn merge_equal_neighbors(&mut self) {
        let mut keep_bp = Vec::with_capacity(self.breakpoints.len());
        let mut keep_val: Vec<f64> = Vec::with_capacity(self.values.len());
        for (bp, v) in self.breakpoints.iter().zip(&self.values) {
            if keep_val.last() == Some(v) {
                continue;
            }
            keep_bp.push(*bp);
            keep_val.push(*v);
        }
        self.breakpoints = keep_bp;
        self.values = keep_val;
    }

    pub fn breakpoints(&self) -> &[f64] {
        &self.breakpoints
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// Length of the segment starting at breakpoint `i`.
    pub fn segment_length(&self, i: usize) -> f64 {
        let end = self.breakpoints.get(i + 1).copied().unwrap_or(1.0);
        end - self.breakpoints[i]
    }

    /// Value at `t`, which is reduced modulo 1 first.
    pub fn eval(&self, t: f64) -> f64 {
        let mut t = t.rem_euclid(1.0);
        if t >= 1.0 {
            t = 0.0;
        }
        let idx = self.breakpoints.partition_point(|&b| b <= t);
        self.values[idx - 1]
    }

    /// Pointwise difference `self - other`, over the union of breakpoints.
    pub fn sub(&self, other: &StepFunction) -> StepFunction {
        let (a, b) = (self, other);
        let mut bps = Vec::with_capacity(a.breakpoints.len() + b.breakpoints.len());
        let mut vals = Vec::with_capacity(bps.capacity());
        let (mut i, mut j) = (0usize, 0usize);
        while i < a.breakpoints.len() || j < b.breakpoints.len() {
            let next_a = a.breakpoints.get(i).copied().unwrap_or(f64::INFINITY);
            let next_b = b.breakpoints.get(j).copied().unwrap_or(f64::INFINITY);
            let t = next_a.min(next_b);
            if next_a == t {
                i += 1;
            }
            if next_b == t {
                j += 1;
            }
            bps.push(t);
            vals.push(a.values[i - 1] - b.values[j - 1]);
        }
        let mut f = StepFunction {
            breakpoints: bps,
            values: vals,
        };
        f.merge_equal_neighbors();
        f
    }

    /// Lower weighted median of the values, weighted by segment length:
    /// the smallest value `v` such that segments with value at most `v`
    /// cover at least half the circle.
    ///
    /// This is the smallest minimizer of `a -> integral |f - a|`.
    pub fn level_median(&self) -> f64 {
        let mut order: Vec<usize> = (0..self.values.len()).collect();
        order.sort_by(|&i, &j| self.values[i].total_cmp(&self.values[j]));
        let mut cum = 0.0;
        for &i in &order {
            cum += self.segment_length(i);
            if cum >= 0.5 {
                return self.values[i];
            }
        }
        // reachable only through accumulated rounding; fall back to the largest value
        self.values[*order.last().unwrap()]
    }

    /// Integral of `|f - a|` over the circle.
    pub fn abs_deviation(&self, a: f64) -> f64 {
        (0..self.values.len())
            .map(|i| self.segment_length(i) * (self.values[i] - a).abs())
            .sum()
    }

    /// Integral of `f` over the circle.
    pub fn integral(&self) -> f64 {
        (0..self.values.len())
            .map(|i| self.segment_length(i) * self.values[i])
            .sum()
    }

    /// Exact integral of `f` over `[a, b]` for `0 <= a <= b <= 1`.
    pub fn integral_over(&self, a: f64, b: f64) -> f64 {
        debug_assert!((0.0..=1.0).contains(&a) && a <= b && b <= 1.0);
        let mut total = 0.0;
        for i in 0..self.values.len() {
            let lo = self.breakpoints[i].max(a);
            let hi = self.breakpoints.get(i + 1).copied().unwrap_or(1.0).min(b);
            if hi > lo {
                total += (hi - lo) * self.values[i];
            }
        }
        total
    }
}
