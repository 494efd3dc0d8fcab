//! Shared oracles and generators for the integration suites. The oracles
//! are deliberately naive and independent of the library's algorithms:
//! the distance oracle enumerates cyclic matchings, the median oracle scans
//! every candidate level.

// Each test binary compiles its own copy and uses a different subset.
#![allow(dead_code)]

use cot_core::rng::{substream, unit_uniform};
use cot_core::{CirclePoint, DiscreteCircularMeasure, StepFunction};
use rand_chacha::ChaCha8Rng;

/// Minimal mean geodesic matching cost between two equal-size uniform-weight
/// samples, by brute force over cyclic shifts of the sorted orders. An
/// optimal circular matching never crosses itself, so it is one of these
/// shifts.
pub fn brute_force_cot(xs: &[f64], ys: &[f64]) -> f64 {
    assert_eq!(xs.len(), ys.len());
    assert!(!xs.is_empty());
    let n = xs.len();
    let mut a = xs.to_vec();
    let mut b = ys.to_vec();
    a.sort_unstable_by(f64::total_cmp);
    b.sort_unstable_by(f64::total_cmp);
    let mut best = f64::INFINITY;
    for shift in 0..n {
        let cost: f64 = (0..n)
            .map(|i| {
                let d = (a[i] - b[(i + shift) % n]).abs();
                d.min(1.0 - d)
            })
            .sum::<f64>()
            / n as f64;
        best = best.min(cost);
    }
    best
}

/// Smallest minimizer of `a -> integral |f - a|`, found by scanning every
/// attained value. Ties within 1e-12 resolve to the smaller level.
pub fn scan_level_median(f: &StepFunction) -> f64 {
    let values = f.values();
    let objective = |a: f64| -> f64 {
        (0..values.len())
            .map(|i| f.segment_length(i) * (values[i] - a).abs())
            .sum()
    };
    let mut best = f64::INFINITY;
    for &v in values {
        best = best.min(objective(v));
    }
    let mut candidates: Vec<f64> = values
        .iter()
        .copied()
        .filter(|&v| objective(v) <= best + 1e-12)
        .collect();
    candidates.sort_unstable_by(f64::total_cmp);
    candidates[0]
}

/// `n` positions drawn uniformly, as raw turn values.
pub fn random_positions(rng: &mut ChaCha8Rng, n: usize) -> Vec<f64> {
    (0..n).map(|_| unit_uniform(rng)).collect()
}

/// A uniform-weight measure on random positions.
pub fn random_measure(rng: &mut ChaCha8Rng, n: usize) -> DiscreteCircularMeasure {
    let points: Vec<CirclePoint> = random_positions(rng, n)
        .into_iter()
        .map(CirclePoint::new)
        .collect();
    DiscreteCircularMeasure::from_points(&points).expect("nonempty")
}

/// A measure with random positions and random positive weights.
pub fn random_weighted_measure(rng: &mut ChaCha8Rng, n: usize) -> DiscreteCircularMeasure {
    let raw: Vec<(CirclePoint, f64)> = (0..n)
        .map(|_| {
            (
                CirclePoint::new(unit_uniform(rng)),
                0.05 + unit_uniform(rng),
            )
        })
        .collect();
    let total: f64 = raw.iter().map(|(_, w)| w).sum();
    let atoms: Vec<(CirclePoint, f64)> = raw.into_iter().map(|(p, w)| (p, w / total)).collect();
    DiscreteCircularMeasure::from_weighted(&atoms).expect("valid atoms")
}

/// Deterministic generator for a named suite.
pub fn suite_rng(suite: &str, index: u64) -> ChaCha8Rng {
    let tag = suite.bytes().fold(0xcbf29ce484222325u64, |h, b| {
        (h ^ b as u64).wrapping_mul(0x100000001b3)
    });
    substream(tag, index)
}

fn average_ranks(values: &[f64]) -> Vec<f64> {
    let n = values.len();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_unstable_by(|&i, &j| values[i].total_cmp(&values[j]));
    let mut ranks = vec![0.0; n];
    let mut i = 0;
    while i < n {
        let mut j = i;
        while j + 1 < n && values[order[j + 1]] == values[order[i]] {
            j += 1;
        }
        let avg = (i + j) as f64 / 2.0 + 1.0;
        for &k in &order[i..=j] {
            ranks[k] = avg;
        }
        i = j + 1;
    }
    ranks
}

/// Spearman rank correlation with average ranks for ties.
pub fn spearman(xs: &[f64], ys: &[f64]) -> f64 {
    assert_eq!(xs.len(), ys.len());
    let rx = average_ranks(xs);
    let ry = average_ranks(ys);
    let n = xs.len() as f64;
    let mx = rx.iter().sum::<f64>() / n;
    let my = ry.iter().sum::<f64>() / n;
    let mut cov = 0.0;
    let mut vx = 0.0;
    let mut vy = 0.0;
    for (a, b) in rx.iter().zip(&ry) {
        cov += (a - mx) * (b - my);
        vx += (a - mx).powi(2);
        vy += (b - my).powi(2);
    }
    cov / (vx * vy).sqrt()
}

/// One-sample Kolmogorov-Smirnov distance against an analytic cdf.
pub fn ks_one_sample(sample: &[f64], cdf: impl Fn(f64) -> f64) -> f64 {
    let mut sorted = sample.to_vec();
    sorted.sort_unstable_by(f64::total_cmp);
    let n = sorted.len() as f64;
    sorted
        .iter()
        .enumerate()
        .map(|(i, &x)| {
            let f = cdf(x);
            (f - i as f64 / n).abs().max(((i + 1) as f64 / n - f).abs())
        })
        .fold(0.0, f64::max)
}
