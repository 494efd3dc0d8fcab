//! The Gaussian limit of the scaled empirical transport distance.
//!
//! For a sample of size `n` from `mu`, the statistic `sqrt(n) * COT(mu_hat, mu)`
//! converges to the integrated absolute deviation of an `F_mu`-Brownian bridge
//! from its level median. This module simulates that limit on a grid and
//! extracts Monte Carlo quantiles, which calibrate the goodness-of-fit test.

use rand::RngCore;
use rand_distr::{Distribution, StandardNormal};
use rayon::prelude::*;

use crate::distributions::CircularDistribution;
use crate::error::{CotError, Result};
use crate::grid::{discretize_distribution, lower_median, GridCdf};
use crate::rng::{stream_id, substream};

const STREAM_TAG: u64 = u64::from_le_bytes(*b"brdgpath");

/// One realization of the `F`-Brownian bridge at the grid points `i/D`.
///
/// Entry `i` holds `B(F((i+1)/D))`; the final entry is pinned to zero since
/// `F(1) = 1`.
#[derive(Debug, Clone)]
pub struct BridgePath {
    values: Vec<f64>,
}

impl BridgePath {
    /// Wraps precomputed path values. Mainly useful for tests and for
    /// statistics of deterministic paths.
    pub fn from_values(values: Vec<f64>) -> Self {
        BridgePath { values }
    }

    pub fn resolution(&self) -> usize {
        self.values.len()
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }
}

pub(crate) fn bridge_values(cdf: &[f64], rng: &mut dyn RngCore) -> Vec<f64> {
    let mut w = Vec::with_capacity(cdf.len());
    let mut acc = 0.0;
    let mut prev = 0.0;
    for &f in cdf {
        let z: f64 = StandardNormal.sample(rng);
        acc += z * (f - prev).sqrt();
        prev = f;
        w.push(acc);
    }
    let total = acc;
    w.iter().zip(cdf).map(|(wi, fi)| wi - fi * total).collect()
}

/// Draws one bridge path with the exact finite-dimensional law at the grid
/// points: `B(F(i/D)) = W(F(i/D)) - F(i/D) W(1)` where `W` accumulates
/// independent Gaussians with variances `F(i/D) - F((i-1)/D)`.
///
/// Where `F` is flat the increments have zero variance, so the path is
/// constant across gaps in the support.
pub fn sample_bridge(f: &GridCdf, rng: &mut dyn RngCore) -> Result<BridgePath> {
    f.ensure_cdf()?;
    Ok(BridgePath {
        values: bridge_values(f.values(), rng),
    })
}

/// Mean absolute deviation of the path from the lower median of its values,
/// i.e. the grid approximation of `inf_a int |B(t) - a| dt`.
pub fn limit_statistic(path: &BridgePath) -> f64 {
    if path.values.is_empty() {
        return 0.0;
    }
    let med = lower_median(&path.values);
    let d = path.values.len() as f64;
    path.values.iter().map(|v| (v - med).abs()).sum::<f64>() / d
}

/// `replicates` independent draws of [`limit_statistic`] under the null
/// `dist`, discretized at `resolution` grid points.
///
/// Replicate `j` draws from a dedicated stream derived from `(seed, j)`, so
/// the output is byte-identical regardless of thread count or scheduling.
pub fn mc_limit_sample(
    dist: &dyn CircularDistribution,
    resolution: usize,
    replicates: usize,
    seed: u64,
) -> Result<Vec<f64>> {
    if replicates == 0 {
        return Err(CotError::InvalidParameter(
            "replicates must be positive".into(),
        ));
    }
    let f = discretize_distribution(dist, resolution)?;
    let cdf = f.values();
    Ok((0..replicates)
        .into_par_iter()
        .map(|j| {
            let mut rng = substream(seed, stream_id(&[STREAM_TAG, j as u64]));
            let values = bridge_values(cdf, &mut rng);
            limit_statistic(&BridgePath { values })
        })
        .collect())
}

/// The `(1-alpha)` Monte Carlo quantile: the order statistic at rank
/// `ceil((1-alpha) * N)`, without interpolation.
pub fn mc_quantile(samples: &[f64], alpha: f64) -> Result<f64> {
    if samples.is_empty() {
        return Err(CotError::EmptySample);
    }
    if !(alpha > 0.0 && alpha < 1.0) {
        return Err(CotError::InvalidParameter(format!(
            "alpha must lie in (0, 1), got {alpha}"
        )));
    }
    let n = samples.len();
    let rank = ((1.0 - alpha) * n as f64).ceil() as usize;
    let rank = rank.clamp(1, n);
    let mut sorted = samples.to_vec();
    sorted.sort_unstable_by(f64::total_cmp);
    Ok(sorted[rank - 1])
}
