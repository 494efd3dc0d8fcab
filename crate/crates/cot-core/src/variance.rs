//! Asymptotic variance of the transport distance between two fixed laws.
//!
//! When `mu != nu`, the centered distance `sqrt(n)(COT(mu_hat, nu) - COT(mu, nu))`
//! is asymptotically normal. Its variance is `Var[int H(t) B(t) dt]` where `B`
//! is the `F_mu`-bridge and `H` is the sign of `F_mu - F_nu` minus its level
//! median. This module locates the sign-change points, runs diagnostics for
//! the regularity assumptions behind the normal limit (continuous densities,
//! no flat stretches, transversal crossings), and evaluates the variance two
//! independent ways: a closed-form panel sum and direct quadrature of the
//! covariance kernel. The two routes adjudicate each other.

use rayon::prelude::*;

use crate::distributions::CircularDistribution;
use crate::error::{CotError, Result};
use crate::grid::{lower_median, GridCdf};
use crate::limit::bridge_values;
use crate::rng::{stream_id, substream};
use crate::step_function::StepFunction;

/// Crossings with |slope| at or below this are reported as tangential.
const SLOPE_TOL: f64 = 1e-6;
/// A grid cell is "flat" when the difference moves less than this across it.
const FLAT_TOL: f64 = 1e-8;
/// Flat cells are only an error when at least this far from the level median.
const FLAT_MARGIN: f64 = 1e-6;
/// Node values at most this close to zero count as exact crossings.
const NODE_ZERO_TOL: f64 = 1e-13;
/// Inputs whose cdf difference never exceeds this are treated as identical.
const IDENTICAL_TOL: f64 = 1e-10;
/// Bisection interval width target for refined crossing locations.
const BISECT_TOL: f64 = 1e-10;
/// Roots this close to 1 are wrapped to 0.
const WRAP_SNAP: f64 = 1e-9;

const MC_STREAM_TAG: u64 = u64::from_le_bytes(*b"sigmapth");

/// Locations where `F_mu - F_nu` crosses its level median, with the slope
/// (density difference) at each crossing.
#[derive(Debug, Clone)]
pub struct IntersectionSet {
    points: Vec<f64>,
    slopes: Vec<f64>,
    levmed: f64,
}

impl IntersectionSet {
    /// Validates the crossing structure: at least two sorted points in
    /// `[0, 1)`, one slope per point, and slopes of strictly alternating
    /// sign (each crossing reverses the sign of the difference).
    pub fn new(points: Vec<f64>, slopes: Vec<f64>, levmed: f64) -> Result<Self> {
        if points.len() < 2 {
            return Err(CotError::InvalidCrossings(format!(
                "need at least two crossings, found {}",
                points.len()
            )));
        }
        if !points.len().is_multiple_of(2) {
            return Err(CotError::InvalidCrossings(format!(
                "crossing count must be even, found {}",
                points.len()
            )));
        }
        if points.len() != slopes.len() {
            return Err(CotError::InvalidCrossings(format!(
                "{} points but {} slopes",
                points.len(),
                slopes.len()
            )));
        }
        if points.iter().any(|t| !(0.0..1.0).contains(t)) {
            return Err(CotError::InvalidCrossings(
                "crossings must lie in [0, 1)".into(),
            ));
        }
        if points.windows(2).any(|w| w[1] <= w[0]) {
            return Err(CotError::InvalidCrossings(
                "crossings must increase strictly".into(),
            ));
        }
        if slopes.windows(2).any(|w| w[0] * w[1] >= 0.0) {
            return Err(CotError::InvalidCrossings(
                "crossing slopes must alternate in sign".into(),
            ));
        }
        Ok(IntersectionSet {
            points,
            slopes,
            levmed,
        })
    }

    pub fn points(&self) -> &[f64] {
        &self.points
    }

    pub fn slopes(&self) -> &[f64] {
        &self.slopes
    }

    pub fn level_median(&self) -> f64 {
        self.levmed
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }
}

/// The piecewise sign `H(t)` of the centered cdf difference, `+1` or `-1`
/// between consecutive crossings.
#[derive(Debug, Clone)]
pub struct SignProfile {
    step: StepFunction,
}

impl SignProfile {
    /// Sign pattern implied by the crossing slopes: the difference moves
    /// above its level median where the slope is positive, below where it is
    /// negative.
    pub fn from_intersections(isect: &IntersectionSet) -> Result<Self> {
        let mut breakpoints = Vec::with_capacity(isect.len() + 1);
        let mut values = Vec::with_capacity(isect.len() + 1);
        if isect.points[0] != 0.0 {
            breakpoints.push(0.0);
            values.push(isect.slopes[isect.len() - 1].signum());
        }
        for (t, slope) in isect.points.iter().zip(&isect.slopes) {
            breakpoints.push(*t);
            values.push(slope.signum());
        }
        let step = StepFunction::new(breakpoints, values)
            .map_err(|e| CotError::InvalidCrossings(e.to_string()))?;
        Ok(SignProfile { step })
    }

    /// Wraps an explicit `±1` step function. Useful for diagnostics such as
    /// the constant profile, which cannot arise from a crossing set.
    pub fn from_step(step: StepFunction) -> Result<Self> {
        if step.values().iter().any(|&v| v != 1.0 && v != -1.0) {
            return Err(CotError::InvalidCrossings(
                "sign profile values must be +1 or -1".into(),
            ));
        }
        Ok(SignProfile { step })
    }

    pub fn step(&self) -> &StepFunction {
        &self.step
    }

    pub fn eval(&self, t: f64) -> f64 {
        self.step.eval(t)
    }

    pub fn integral(&self) -> f64 {
        self.step.integral()
    }
}

/// Locates the crossings between `F_mu - F_nu` and its level median.
///
/// The level median comes from the difference sampled at `i/resolution`; sign
/// changes over that grid are refined by bisection on the analytic cdfs down
/// to an interval of `1e-10`. The slope at each crossing is the density
/// difference there.
///
/// The regularity diagnostics reject inputs the normal limit does not cover:
/// coinciding laws, a difference that is flat across two consecutive grid
/// cells away from its level median, and crossings where the densities agree
/// (near-zero slope).
pub fn find_intersections(
    mu: &dyn CircularDistribution,
    nu: &dyn CircularDistribution,
    resolution: usize,
) -> Result<IntersectionSet> {
    if resolution < 2 {
        return Err(CotError::InvalidParameter(format!(
            "crossing scan needs a resolution of at least 2, got {resolution}"
        )));
    }
    let d = resolution;
    let diff = |t: f64| -> f64 { mu.cdf(t) - nu.cdf(t) };

    // Node i holds the difference at t = i/d, including both endpoints.
    let nodes: Vec<f64> = (0..=d).map(|i| diff(i as f64 / d as f64)).collect();
    if nodes.iter().all(|v| v.abs() <= IDENTICAL_TOL) {
        return Err(CotError::IdenticalDistributions);
    }
    let levmed = lower_median(&nodes[1..]);
    let s: Vec<f64> = nodes.iter().map(|v| v - levmed).collect();

    for i in 0..d.saturating_sub(1) {
        let flat_a = (nodes[i + 1] - nodes[i]).abs() <= FLAT_TOL;
        let flat_b = (nodes[i + 2] - nodes[i + 1]).abs() <= FLAT_TOL;
        if flat_a && flat_b && s[i + 1].abs() > FLAT_MARGIN {
            return Err(CotError::FlatDifference {
                t: (i + 1) as f64 / d as f64,
            });
        }
    }

    let phi = |t: f64| -> f64 { diff(t) - levmed };
    let mut roots: Vec<f64> = Vec::new();
    let mut i = 0;
    while i <= d {
        if s[i].abs() <= NODE_ZERO_TOL {
            // A run of near-zero nodes is a crossing sitting on the grid; a
            // run consisting only of the right endpoint duplicates the wrap
            // point already visible at node 0.
            let start = i;
            while i <= d && s[i].abs() <= NODE_ZERO_TOL {
                i += 1;
            }
            if start < d {
                let mid = (start + i - 1) / 2;
                roots.push(mid.min(d - 1) as f64 / d as f64);
            }
            continue;
        }
        if i < d && s[i + 1].abs() > NODE_ZERO_TOL && s[i] * s[i + 1] < 0.0 {
            let (mut lo, mut hi) = (i as f64 / d as f64, (i + 1) as f64 / d as f64);
            let mut phi_lo = s[i];
            while hi - lo > BISECT_TOL {
                let mid = 0.5 * (lo + hi);
                let phi_mid = phi(mid);
                if phi_mid == 0.0 {
                    lo = mid;
                    hi = mid;
                } else if phi_lo * phi_mid < 0.0 {
                    hi = mid;
                } else {
                    lo = mid;
                    phi_lo = phi_mid;
                }
            }
            roots.push(0.5 * (lo + hi));
        }
        i += 1;
    }

    for r in roots.iter_mut() {
        if *r >= 1.0 - WRAP_SNAP {
            *r = 0.0;
        }
    }
    roots.sort_unstable_by(f64::total_cmp);
    roots.dedup_by(|a, b| (*a - *b).abs() <= WRAP_SNAP);

    if roots.is_empty() {
        return Err(CotError::InvalidCrossings(
            "no crossings of the level median were found".into(),
        ));
    }
    let slopes: Vec<f64> = roots
        .iter()
        .map(|&t| mu.density(t) - nu.density(t))
        .collect();
    for (&t, &slope) in roots.iter().zip(&slopes) {
        if slope.abs() <= SLOPE_TOL {
            return Err(CotError::TangentialCrossing { t, slope });
        }
    }
    IntersectionSet::new(roots, slopes, levmed)
}

/// Integral of the piecewise-linear interpolant of `f` over `[a, b]`,
/// computed exactly via trapezoids split at the grid nodes.
fn pl_integral(f: &GridCdf, a: f64, b: f64) -> f64 {
    let d = f.resolution() as f64;
    let mut total = 0.0;
    let mut x0 = a;
    let mut y0 = f.interpolate(a);
    let mut k = (a * d).floor() as i64 + 1;
    loop {
        let x1 = (k as f64 / d).min(b);
        let y1 = f.interpolate(x1);
        total += 0.5 * (y0 + y1) * (x1 - x0);
        if x1 >= b {
            break;
        }
        x0 = x1;
        y0 = y1;
        k += 1;
    }
    total
}

/// Integral of `f(s) * (b - s)` over `[a, b]` for piecewise-linear `f`;
/// Simpson on each grid piece is exact for the quadratic integrand.
fn pl_integral_weighted(f: &GridCdf, a: f64, b: f64) -> f64 {
    let d = f.resolution() as f64;
    let g = |s: f64| f.interpolate(s) * (b - s);
    let mut total = 0.0;
    let mut x0 = a;
    let mut g0 = g(a);
    let mut k = (a * d).floor() as i64 + 1;
    loop {
        let x1 = (k as f64 / d).min(b);
        let g1 = g(x1);
        let w = x1 - x0;
        if w > 0.0 {
            total += w / 6.0 * (g0 + 4.0 * g(0.5 * (x0 + x1)) + g1);
        }
        if x1 >= b {
            break;
        }
        x0 = x1;
        g0 = g1;
        k += 1;
    }
    total
}

fn panels_of(isect: &IntersectionSet) -> Vec<(f64, f64)> {
    let mut pts = Vec::with_capacity(isect.len() + 2);
    pts.push(0.0);
    for &t in isect.points() {
        if t > 0.0 {
            pts.push(t);
        }
    }
    pts.push(1.0);
    pts.windows(2).map(|w| (w[0], w[1])).collect()
}

/// Closed-form variance `Var[int H(t) B_{F_mu}(t) dt]`, evaluated as a sum
/// over the panels between consecutive crossings (with endpoints 0 and 1
/// added): the diagonal panel terms of the covariance kernel, the signed
/// cross-panel terms, and the squared signed mean of `F_mu`.
pub fn sigma_closed_form(f_mu: &GridCdf, isect: &IntersectionSet, h: &SignProfile) -> Result<f64> {
    f_mu.ensure_cdf()?;
    if isect.len() < 2 {
        return Err(CotError::InvalidCrossings(
            "variance needs at least two crossings".into(),
        ));
    }
    let panels = panels_of(isect);
    let signs: Vec<f64> = panels.iter().map(|&(a, b)| h.eval(0.5 * (a + b))).collect();
    let int_f: Vec<f64> = panels
        .iter()
        .map(|&(a, b)| pl_integral(f_mu, a, b))
        .collect();

    let term1: f64 = panels
        .iter()
        .map(|&(a, b)| 2.0 * pl_integral_weighted(f_mu, a, b))
        .sum();

    // sum_{i>j} H_i H_j len_i intF_j, accumulated with a running suffix of
    // signed lengths.
    let mut term2 = 0.0;
    let mut suffix_len = 0.0;
    for j in (0..panels.len()).rev() {
        term2 += 2.0 * signs[j] * int_f[j] * suffix_len;
        suffix_len += signs[j] * (panels[j].1 - panels[j].0);
    }

    let signed_mean: f64 = signs.iter().zip(&int_f).map(|(s, f)| s * f).sum();
    let term3 = -signed_mean * signed_mean;

    Ok((term1 + term2 + term3).max(0.0))
}

/// Independent evaluation of the same variance as the double integral of
/// `H(s) H(t) [F(min(s,t)) - F(s) F(t)]`, via an exact inner integral in `t`
/// and composite Simpson in `s` over each constant-sign segment.
pub fn sigma_quadrature(f_mu: &GridCdf, h: &SignProfile) -> Result<f64> {
    f_mu.ensure_cdf()?;
    let step = h.step();
    let bps = step.breakpoints();
    let vals = step.values();
    let seg_end = |k: usize| -> f64 { bps.get(k + 1).copied().unwrap_or(1.0) };

    // Prefix of int H F over whole segments, so the inner integral at s only
    // walks the partial segment containing s.
    let seg_int_f: Vec<f64> = (0..bps.len())
        .map(|k| vals[k] * pl_integral(f_mu, bps[k], seg_end(k)))
        .collect();
    let mut prefix_hf = vec![0.0; bps.len() + 1];
    for k in 0..bps.len() {
        prefix_hf[k + 1] = prefix_hf[k] + seg_int_f[k];
    }
    let total_hf = prefix_hf[bps.len()];

    let mut sigma2 = 0.0;
    for k in 0..bps.len() {
        let (a, b) = (bps[k], seg_end(k));
        let inner = |s: f64| -> f64 {
            let int_hf_left = prefix_hf[k] + vals[k] * pl_integral(f_mu, a, s);
            let int_h_right = step.integral_over(s, 1.0);
            let fs = f_mu.interpolate(s);
            int_hf_left + fs * (int_h_right - total_hf)
        };
        let integrand = |s: f64| vals[k] * inner(s);
        sigma2 += crate::numeric::composite_simpson(&integrand, a, b, 256);
    }
    Ok(sigma2.max(0.0))
}

/// Monte Carlo reference for the same variance: simulates bridge paths on the
/// grid of `f_mu` and takes the sample variance of `sum_i B(i/D) * w_i`,
/// where `w_i` integrates `H` over the cell ending at `i/D`.
pub fn sigma_monte_carlo(f_mu: &GridCdf, h: &SignProfile, paths: usize, seed: u64) -> Result<f64> {
    f_mu.ensure_cdf()?;
    if paths < 2 {
        return Err(CotError::InvalidParameter(
            "variance estimation needs at least two paths".into(),
        ));
    }
    let d = f_mu.resolution();
    let weights: Vec<f64> = (0..d)
        .map(|i| {
            h.step()
                .integral_over(i as f64 / d as f64, (i + 1) as f64 / d as f64)
        })
        .collect();
    let cdf = f_mu.values();
    let draws: Vec<f64> = (0..paths)
        .into_par_iter()
        .map(|j| {
            let mut rng = substream(seed, stream_id(&[MC_STREAM_TAG, j as u64]));
            let b = bridge_values(cdf, &mut rng);
            b.iter().zip(&weights).map(|(bi, wi)| bi * wi).sum::<f64>()
        })
        .collect();
    let n = paths as f64;
    let mean = draws.iter().sum::<f64>() / n;
    Ok(draws.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0))
}

/// Pooled two-sample variance with mixing proportion `delta = n/(n+m)`.
///
/// The combination uses weights `sqrt(delta)` and `sqrt(1-delta)`, not the
/// linear weights `delta` and `1-delta` a naive pooling argument would
/// suggest; the square-root form is kept deliberately.
pub fn two_sample_variance(sigma_mu_nu: f64, sigma_nu_mu: f64, delta: f64) -> Result<f64> {
    if !(delta > 0.0 && delta < 1.0) {
        return Err(CotError::InvalidProportion(delta));
    }
    if sigma_mu_nu < 0.0 || sigma_nu_mu < 0.0 {
        return Err(CotError::InvalidParameter(
            "variances must be nonnegative".into(),
        ));
    }
    Ok(delta.sqrt() * sigma_mu_nu + (1.0 - delta).sqrt() * sigma_nu_mu)
}
