use super::CircularDistribution;
use crate::circle::CirclePoint;
use crate::error::{CotError, Result};
use crate::numeric::{adaptive_simpson, ln_bessel_i0};
use crate::rng::unit_uniform;
use rand::RngCore;
use std::f64::consts::{PI, TAU};

/// Quadrature tolerance for single cdf evaluations.
const CDF_TOL: f64 = 1e-10;
/// Per-cell tolerance when building a whole cdf grid incrementally.
const GRID_CELL_TOL: f64 = 1e-13;

/// Von Mises distribution with mode `theta` (turns) and concentration `kappa`.
///
/// The density is `exp(kappa cos(2 pi (t - theta))) / I0(kappa)`; at
/// `kappa = 0` it degenerates to the uniform distribution. The cdf has no
/// closed form and is evaluated by adaptive quadrature; the normalization is
/// computed once at construction.
#[derive(Debug, Clone)]
pub struct VonMises {
    theta: f64,
    kappa: f64,
    ln_norm: f64,
}

impl VonMises {
    pub fn new(theta: f64, kappa: f64) -> Result<Self> {
        if !theta.is_finite() {
            return Err(CotError::InvalidParameter(format!(
                "von Mises location must be finite, got {theta}"
            )));
        }
        if !kappa.is_finite() || kappa < 0.0 {
            return Err(CotError::InvalidParameter(format!(
                "von Mises concentration must be finite and nonnegative, got {kappa}"
            )));
        }
        Ok(VonMises {
            theta: CirclePoint::new(theta).value(),
            kappa,
            ln_norm: ln_bessel_i0(kappa),
        })
    }

    pub fn theta(&self) -> f64 {
        self.theta
    }

    pub fn kappa(&self) -> f64 {
        self.kappa
    }

    fn is_uniform(&self) -> bool {
        self.kappa < 1e-12
    }
}

impl CircularDistribution for VonMises {
    fn density(&self, t: f64) -> f64 {
        (self.kappa * (TAU * (t - self.theta)).cos() - self.ln_norm).exp()
    }

    fn cdf(&self, t: f64) -> f64 {
        if t <= 0.0 {
            return 0.0;
        }
        if t >= 1.0 {
            return 1.0;
        }
        if self.is_uniform() {
            return t;
        }
        adaptive_simpson(&|x| self.density(x), 0.0, t, CDF_TOL).clamp(0.0, 1.0)
    }

    fn quantile(&self, _p: f64) -> Option<f64> {
        None
    }

    /// Best-Fisher rejection sampling with a wrapped Cauchy envelope.
    fn sample_one(&self, rng: &mut dyn RngCore) -> CirclePoint {
        if self.is_uniform() {
            return CirclePoint::new(unit_uniform(rng));
        }
        let kappa = self.kappa;
        let tau = 1.0 + (1.0 + 4.0 * kappa * kappa).sqrt();
        let rho = (tau - (2.0 * tau).sqrt()) / (2.0 * kappa);
        let r = (1.0 + rho * rho) / (2.0 * rho);
        loop {
            let u1 = unit_uniform(rng);
            let z = (PI * u1).cos();
            let f = (1.0 + r * z) / (r + z);
            let c = kappa * (r - f);
            let u2 = unit_uniform(rng);
            if c * (2.0 - c) - u2 > 0.0 || (u2 > 0.0 && (c / u2).ln() + 1.0 - c >= 0.0) {
                let u3 = unit_uniform(rng);
                let delta = f.clamp(-1.0, 1.0).acos() / TAU;
                let t = if u3 < 0.5 {
                    self.theta - delta
                } else {
                    self.theta + delta
                };
                return CirclePoint::new(t);
            }
        }
    }

    fn cdf_grid(&self, resolution: usize) -> Vec<f64> {
        if self.is_uniform() {
            let d = resolution as f64;
            return (1..=resolution).map(|i| i as f64 / d).collect();
        }
        // one quadrature per cell, accumulated, instead of one per prefix
        let d = resolution as f64;
        let mut grid = Vec::with_capacity(resolution);
        let mut cum = 0.0;
        for i in 1..=resolution {
            let a = (i - 1) as f64 / d;
            let b = i as f64 / d;
            cum += adaptive_simpson(&|x| self.density(x), a, b, GRID_CELL_TOL);
            grid.push(cum.clamp(0.0, 1.0));
        }
        grid
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numeric::composite_simpson;

    #[test]
    fn density_integrates_to_one() {
        for kappa in [0.0, 0.5, 2.0, 5.0, 20.0] {
            let vm = VonMises::new(0.3, kappa).unwrap();
            let mass = composite_simpson(&|t| vm.density(t), 0.0, 1.0, 4096);
            assert!((mass - 1.0).abs() < 1e-10, "kappa={kappa}: mass={mass}");
        }
    }

    #[test]
    fn density_peaks_at_mode() {
        let vm = VonMises::new(0.5, 2.0).unwrap();
        let at_mode = vm.density(0.5);
        assert!(at_mode > vm.density(0.4));
        assert!(at_mode > vm.density(0.6));
        // e^kappa / I0(kappa)
        let expect = (2.0f64.exp()) / crate::numeric::bessel_i0(2.0);
        assert!((at_mode - expect).abs() < 1e-12);
    }

    #[test]
    fn cdf_endpoints_and_monotonicity() {
        let vm = VonMises::new(0.5, 2.0).unwrap();
        assert_eq!(vm.cdf(0.0), 0.0);
        assert_eq!(vm.cdf(1.0), 1.0);
        let mut prev = 0.0;
        for i in 1..=50 {
            let c = vm.cdf(i as f64 / 50.0);
            assert!(c >= prev);
            prev = c;
        }
    }

    #[test]
    fn cdf_reflection_symmetry_about_mode() {
        // density symmetric about theta = 0.5 pairs [0, 1/4] with [3/4, 1]
        let vm = VonMises::new(0.5, 2.0).unwrap();
        assert!((vm.cdf(0.25) + vm.cdf(0.75) - 1.0).abs() < 1e-8);
        assert!((vm.cdf(0.5) - 0.5).abs() < 1e-8);
    }

    #[test]
    fn grid_matches_pointwise_cdf() {
        let vm = VonMises::new(0.2, 3.0).unwrap();
        let grid = vm.cdf_grid(64);
        for (i, g) in grid.iter().enumerate() {
            let direct = vm.cdf((i + 1) as f64 / 64.0);
            assert!((g - direct).abs() < 1e-9);
        }
        assert!((grid[63] - 1.0).abs() < 1e-10);
    }

    #[test]
    fn zero_concentration_is_uniform() {
        let vm = VonMises::new(0.7, 0.0).unwrap();
        assert_eq!(vm.cdf(0.3), 0.3);
        assert_eq!(vm.density(0.9), 1.0);
    }

    #[test]
    fn rejects_bad_parameters() {
        assert!(VonMises::new(0.5, -1.0).is_err());
        assert!(VonMises::new(0.5, f64::NAN).is_err());
        assert!(VonMises::new(f64::INFINITY, 1.0).is_err());
    }
}
