//! Scripted, seeded experiment runs emitting CSV artifacts: the critical
//! value table, limit-law and bootstrap convergence, power curves, and
//! distance curves over parameter grids.
//!
//! Each run returns the complete CSV as a string. The header lines echo the
//! full configuration together with a hash of its JSON form, and rows are
//! produced in a fixed order with fixed formatting, so a rerun with the same
//! configuration is byte-identical regardless of thread count.

use std::fmt::Write as _;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::distributions::{CircularDistribution, Family};
use crate::error::{CotError, Result};
use crate::grid::{cot_grid, discretize_distribution, discretize_measure};
use crate::inference::{
    bootstrap_distribution, power_curve, BootstrapReference, BootstrapSpec, TestLabel,
};
use crate::limit::{mc_limit_sample, mc_quantile};
use crate::measure::DiscreteCircularMeasure;
use crate::rng::{stream_id, substream};

const TABLE_STREAM_TAG: u64 = u64::from_le_bytes(*b"tablequn");
const CLT_STREAM_TAG: u64 = u64::from_le_bytes(*b"cltconvg");
const CLT_BASE_TAG: u64 = u64::from_le_bytes(*b"cltbases");
const CLT_BOOT_TAG: u64 = u64::from_le_bytes(*b"cltboots");

/// Concentration values of the critical-value table.
pub const TABLE_KAPPAS: [f64; 5] = [0.0, 0.5, 1.0, 2.0, 3.0];
/// Significance levels of the critical-value table.
pub const TABLE_ALPHAS: [f64; 3] = [0.1, 0.05, 0.01];

/// Everything an experiment run depends on. The whole struct is echoed into
/// the CSV header, so an artifact names its own reproduction recipe.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ExperimentConfig {
    pub id: String,
    pub seed: u64,
    /// Grid resolution for statistics and limit draws.
    pub resolution: usize,
    /// Finer resolution for the distance-curve figures.
    pub curve_resolution: usize,
    /// Monte Carlo replicates behind limit-law quantiles.
    pub limit_replicates: usize,
    /// Replicates per grid point in convergence and power runs.
    pub reps: usize,
    pub alpha: f64,
    /// Sample size for the power designs.
    pub power_sample_size: usize,
    /// Sample sizes for the convergence run.
    pub sample_sizes: Vec<usize>,
    /// Von Mises concentrations for the power design.
    pub kappa_grid: Vec<f64>,
    /// Concentrations for the bimodal power design.
    pub stephens_concentrations: Vec<f64>,
    /// Mode counts for the fixed-concentration power design.
    pub stephens_modes: Vec<u32>,
    /// Subsample exponent: the reduced-size bootstrap draws `ceil(n^e)`.
    pub bootstrap_exponent: f64,
    /// Output path the caller intends to write to; informational here.
    pub out: Option<String>,
}

impl ExperimentConfig {
    /// Defaults sized to finish in minutes on a workstation.
    pub fn desk(id: &str, seed: u64) -> Self {
        ExperimentConfig {
            id: id.to_string(),
            seed,
            resolution: 1000,
            curve_resolution: 10_000,
            limit_replicates: 100_000,
            reps: 2000,
            alpha: 0.05,
            power_sample_size: 30,
            sample_sizes: vec![3, 10, 30, 100, 300, 1000, 3000],
            kappa_grid: (0..=25).map(|i| i as f64 / 10.0).collect(),
            stephens_concentrations: (10..=50).map(|i| i as f64 / 10.0).collect(),
            stephens_modes: vec![1, 2, 3],
            bootstrap_exponent: 0.8,
            out: None,
        }
    }

    /// Publication-scale replicate counts; hours, not minutes.
    pub fn full(id: &str, seed: u64) -> Self {
        ExperimentConfig {
            limit_replicates: 1_000_000,
            reps: 10_000,
            ..ExperimentConfig::desk(id, seed)
        }
    }

    fn validate(&self) -> Result<()> {
        if self.resolution == 0 || self.curve_resolution == 0 {
            return Err(CotError::ZeroResolution);
        }
        if self.limit_replicates == 0 || self.reps == 0 {
            return Err(CotError::InvalidParameter(
                "replicate counts must be positive".into(),
            ));
        }
        if !(self.alpha > 0.0 && self.alpha < 1.0) {
            return Err(CotError::InvalidParameter(format!(
                "alpha must lie in (0, 1), got {}",
                self.alpha
            )));
        }
        if !(self.bootstrap_exponent > 0.0 && self.bootstrap_exponent <= 1.0) {
            return Err(CotError::InvalidParameter(format!(
                "bootstrap exponent must lie in (0, 1], got {}",
                self.bootstrap_exponent
            )));
        }
        Ok(())
    }

    fn subsample_size(&self, n: usize) -> usize {
        (n as f64).powf(self.bootstrap_exponent).ceil() as usize
    }
}

fn fnv1a(bytes: &[u8]) -> u64 {
    let mut h: u64 = 0xcbf29ce484222325;
    for &b in bytes {
        h ^= b as u64;
        h = h.wrapping_mul(0x100000001b3);
    }
    h
}

fn csv_header(config: &ExperimentConfig, name: &str) -> String {
    let json = serde_json::to_string(config).expect("config serializes");
    format!(
        "# experiment: {name}\n# config: {json}\n# config-hash: {:016x}\n",
        fnv1a(json.as_bytes())
    )
}

fn fmt(x: f64) -> String {
    format!("{x:.9e}")
}

/// Exact two-sample Kolmogorov-Smirnov distance
/// `sup_t |F_x(t) - F_y(t)|`, computed from merged order statistics.
pub fn ks_distance(xs: &[f64], ys: &[f64]) -> Result<f64> {
    if xs.is_empty() || ys.is_empty() {
        return Err(CotError::EmptySample);
    }
    let mut a = xs.to_vec();
    let mut b = ys.to_vec();
    a.sort_unstable_by(f64::total_cmp);
    b.sort_unstable_by(f64::total_cmp);
    let (na, nb) = (a.len() as f64, b.len() as f64);
    let (mut i, mut j) = (0usize, 0usize);
    let mut sup: f64 = 0.0;
    while i < a.len() && j < b.len() {
        let t = a[i].min(b[j]);
        while i < a.len() && a[i] <= t {
            i += 1;
        }
        while j < b.len() && b[j] <= t {
            j += 1;
        }
        sup = sup.max((i as f64 / na - j as f64 / nb).abs());
    }
    Ok(sup)
}

fn von_mises_alternative(kappa: f64) -> Result<Box<dyn CircularDistribution>> {
    Family::VonMises { theta: 0.5, kappa }.build()
}

/// Critical values of the one-sample transport test for von Mises nulls.
/// Rows: `kappa, alpha, quantile`.
pub fn run_table1(config: &ExperimentConfig) -> Result<String> {
    config.validate()?;
    let mut out = csv_header(config, "table1");
    out += "kappa,alpha,quantile\n";
    for (i, &kappa) in TABLE_KAPPAS.iter().enumerate() {
        let null = von_mises_alternative(kappa)?;
        let seed = stream_id(&[config.seed, TABLE_STREAM_TAG, i as u64]);
        let draws = mc_limit_sample(
            null.as_ref(),
            config.resolution,
            config.limit_replicates,
            seed,
        )?;
        for &alpha in &TABLE_ALPHAS {
            let q = mc_quantile(&draws, alpha)?;
            writeln!(out, "{kappa},{alpha},{}", fmt(q)).unwrap();
        }
    }
    Ok(out)
}

/// Convergence of the scaled empirical distance to its limit law, and of the
/// reduced-size bootstrap to the same target, measured by the KS distance to
/// a shared Monte Carlo limit sample. Rows: `n, ks_empirical, ks_bootstrap`.
pub fn run_clt_convergence(config: &ExperimentConfig) -> Result<String> {
    config.validate()?;
    let uniform = Family::Uniform.build()?;
    let d = config.resolution;
    let limit_draws = mc_limit_sample(uniform.as_ref(), d, config.limit_replicates, config.seed)?;
    let null_grid = discretize_distribution(uniform.as_ref(), d)?;

    let mut out = csv_header(config, "clt-convergence");
    out += "n,ks_empirical,ks_bootstrap\n";
    for &n in &config.sample_sizes {
        let stats: Vec<f64> = (0..config.reps)
            .into_par_iter()
            .map(|j| {
                let mut rng = substream(
                    config.seed,
                    stream_id(&[CLT_STREAM_TAG, n as u64, j as u64]),
                );
                let sample = uniform.sample(&mut rng, n);
                let measure = DiscreteCircularMeasure::from_points(&sample)?;
                let g = cot_grid(&discretize_measure(&measure, d)?, &null_grid)?;
                Ok((n as f64).sqrt() * g)
            })
            .collect::<Result<_>>()?;
        let ks_empirical = ks_distance(&stats, &limit_draws)?;

        let mut base_rng = substream(config.seed, stream_id(&[CLT_BASE_TAG, n as u64]));
        let base = uniform.sample(&mut base_rng, n);
        let spec = BootstrapSpec::m_of_n(
            config.reps,
            stream_id(&[config.seed, CLT_BOOT_TAG, n as u64]),
        )
        .with_m(config.subsample_size(n));
        let boot = bootstrap_distribution(&base, &spec, BootstrapReference::Empirical)?;
        let ks_bootstrap = ks_distance(&boot, &limit_draws)?;

        writeln!(out, "{n},{},{}", fmt(ks_empirical), fmt(ks_bootstrap)).unwrap();
    }
    Ok(out)
}

/// Power of the four uniformity tests across the three alternative designs.
/// Rows: `design, test, param, power`.
pub fn run_power_figures(config: &ExperimentConfig) -> Result<String> {
    config.validate()?;

    let mut designs: Vec<(&str, Vec<(f64, Box<dyn CircularDistribution>)>)> = Vec::new();
    designs.push((
        "vonmises",
        config
            .kappa_grid
            .iter()
            .map(|&kappa| Ok((kappa, von_mises_alternative(kappa)?)))
            .collect::<Result<_>>()?,
    ));
    designs.push((
        "stephens-concentration",
        config
            .stephens_concentrations
            .iter()
            .map(|&l| {
                Ok((
                    l,
                    Family::Stephens {
                        modes: 2,
                        concentration: l,
                    }
                    .build()?,
                ))
            })
            .collect::<Result<_>>()?,
    ));
    designs.push((
        "stephens-modes",
        config
            .stephens_modes
            .iter()
            .map(|&m| {
                Ok((
                    m as f64,
                    Family::Stephens {
                        modes: m,
                        concentration: 2.0,
                    }
                    .build()?,
                ))
            })
            .collect::<Result<_>>()?,
    ));

    let tests = [
        TestLabel::Cott,
        TestLabel::Rayleigh,
        TestLabel::Kuiper,
        TestLabel::Watson,
    ];
    let mut out = csv_header(config, "power-figures");
    out += "design,test,param,power\n";
    for (design, alternatives) in &designs {
        for &test in &tests {
            let curve = power_curve(
                test,
                alternatives,
                config.power_sample_size,
                config.reps,
                config.alpha,
                config.seed,
            )?;
            for (param, power) in curve {
                writeln!(out, "{design},{},{param},{}", test.name(), fmt(power)).unwrap();
            }
        }
    }
    Ok(out)
}

/// Grid transport distance from the uniform law along parameter curves.
/// Rows: `family, param, cot`.
pub fn run_cot_curves(config: &ExperimentConfig) -> Result<String> {
    config.validate()?;
    let d = config.curve_resolution;
    let uniform_grid = discretize_distribution(Family::Uniform.build()?.as_ref(), d)?;

    let mut curves: Vec<(String, f64, Box<dyn CircularDistribution>)> = Vec::new();
    for i in 0..=50 {
        let kappa = i as f64 / 10.0;
        curves.push(("vonmises".to_string(), kappa, von_mises_alternative(kappa)?));
    }
    for &modes in &[1u32, 2, 3] {
        for i in 10..=50 {
            let l = i as f64 / 10.0;
            curves.push((
                format!("stephens-m{modes}"),
                l,
                Family::Stephens {
                    modes,
                    concentration: l,
                }
                .build()?,
            ));
        }
    }

    let values: Vec<f64> = curves
        .par_iter()
        .map(|(_, _, dist)| {
            let grid = discretize_distribution(dist.as_ref(), d)?;
            cot_grid(&grid, &uniform_grid)
        })
        .collect::<Result<_>>()?;

    let mut out = csv_header(config, "cot-curves");
    out += "family,param,cot\n";
    for ((family, param, _), value) in curves.iter().zip(values) {
        writeln!(out, "{family},{param},{}", fmt(value)).unwrap();
    }
    Ok(out)
}

/// Dispatches an experiment by id.
pub fn run_experiment(config: &ExperimentConfig) -> Result<String> {
    match config.id.as_str() {
        "table1" => run_table1(config),
        "clt-convergence" => run_clt_convergence(config),
        "power-figures" => run_power_figures(config),
        "cot-curves" => run_cot_curves(config),
        other => Err(CotError::InvalidParameter(format!(
            "unknown experiment id '{other}'; expected table1, clt-convergence, power-figures, or cot-curves"
        ))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ks_distance_basics() {
        let a = [0.1, 0.2, 0.3];
        assert_eq!(ks_distance(&a, &a).unwrap(), 0.0);
        // Disjoint supports separate completely.
        let b = [1.1, 1.2, 1.3];
        assert_eq!(ks_distance(&a, &b).unwrap(), 1.0);
        // One of two points below the singleton: |1/2 - 0| = 1/2 at t = 0.1.
        let c = [0.15];
        assert!((ks_distance(&[0.1, 0.2], &c).unwrap() - 0.5).abs() < 1e-15);
        assert!(ks_distance(&a, &[]).is_err());
    }

    #[test]
    fn ks_distance_handles_ties() {
        let a = [0.5, 0.5, 0.5, 0.5];
        let b = [0.5, 0.5];
        assert_eq!(ks_distance(&a, &b).unwrap(), 0.0);
        let c = [0.5, 0.7];
        // After t = 0.5: F_a = 1, F_c = 1/2.
        assert!((ks_distance(&a, &c).unwrap() - 0.5).abs() < 1e-15);
    }

    fn tiny_config(id: &str) -> ExperimentConfig {
        ExperimentConfig {
            resolution: 100,
            curve_resolution: 200,
            limit_replicates: 200,
            reps: 50,
            sample_sizes: vec![5, 20],
            kappa_grid: vec![0.0, 2.0],
            stephens_concentrations: vec![1.0, 3.0],
            stephens_modes: vec![1, 2],
            ..ExperimentConfig::desk(id, 31)
        }
    }

    #[test]
    fn reruns_are_byte_identical() {
        for id in ["table1", "clt-convergence", "power-figures", "cot-curves"] {
            let config = tiny_config(id);
            let a = run_experiment(&config).unwrap();
            let b = run_experiment(&config).unwrap();
            assert_eq!(a, b, "{id} differs between reruns");
        }
    }

    #[test]
    fn header_carries_config_and_hash() {
        let config = tiny_config("table1");
        let csv = run_table1(&config).unwrap();
        assert!(csv.starts_with("# experiment: table1\n"));
        assert!(csv.contains("# config: {"));
        assert!(csv.contains("# config-hash: "));
        assert!(csv.contains("\"seed\":31"));
        let rows = csv.lines().filter(|l| !l.starts_with('#')).count();
        // Column header plus 5 kappas times 3 alphas.
        assert_eq!(rows, 1 + 15);
    }

    #[test]
    fn distinct_seeds_change_the_artifact() {
        let a = run_table1(&tiny_config("table1")).unwrap();
        let b = run_table1(&ExperimentConfig {
            seed: 32,
            ..tiny_config("table1")
        })
        .unwrap();
        assert_ne!(a, b);
    }

    #[test]
    fn cot_curves_start_at_zero_and_grow() {
        let csv = run_cot_curves(&tiny_config("cot-curves")).unwrap();
        let mut vm: Vec<(f64, f64)> = Vec::new();
        for line in csv.lines().filter(|l| !l.starts_with('#')).skip(1) {
            let cells: Vec<&str> = line.split(',').collect();
            if cells[0] == "vonmises" {
                vm.push((cells[1].parse().unwrap(), cells[2].parse().unwrap()));
            }
        }
        assert_eq!(vm.len(), 51);
        assert!(vm[0].1.abs() < 1e-12, "kappa 0 gives distance 0");
        for w in vm.windows(2) {
            assert!(w[1].1 > w[0].1, "distance grows with concentration");
        }
    }

    #[test]
    fn unknown_experiment_id_errors() {
        let config = tiny_config("figure-9");
        assert!(matches!(
            run_experiment(&config),
            Err(CotError::InvalidParameter(_))
        ));
    }

    #[test]
    fn invalid_configs_are_rejected() {
        let mut config = tiny_config("table1");
        config.alpha = 1.5;
        assert!(run_table1(&config).is_err());
        let mut config = tiny_config("table1");
        config.resolution = 0;
        assert!(run_table1(&config).is_err());
    }
}
