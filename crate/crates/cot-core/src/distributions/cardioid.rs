use super::CircularDistribution;
use crate::circle::CirclePoint;
use crate::error::{CotError, Result};
use crate::rng::unit_uniform;
use rand::RngCore;
use std::f64::consts::{PI, TAU};

/// Cardioid distribution with mode `theta` (turns) and concentration `rho`
/// in `[-1/2, 1/2]`; negative `rho` flips the mode to the antipode.
///
/// Density in turns: `1 + 2 rho cos(2 pi (t - theta))`. The cdf is closed
/// form; the quantile has no algebraic inverse and is found by bisection,
/// which is also how sampling works.
#[derive(Debug, Clone, Copy)]
pub struct Cardioid {
    theta: f64,
    rho: f64,
}

impl Cardioid {
    pub fn new(theta: f64, rho: f64) -> Result<Self> {
        if !theta.is_finite() {
            return Err(CotError::InvalidParameter(format!(
                "cardioid location must be finite, got {theta}"
            )));
        }
        if !rho.is_finite() || !(-0.5..=0.5).contains(&rho) {
            return Err(CotError::InvalidParameter(format!(
                "cardioid concentration must lie in [-1/2, 1/2], got {rho}"
            )));
        }
        Ok(Cardioid {
            theta: CirclePoint::new(theta).value(),
            rho,
        })
    }

    pub fn theta(&self) -> f64 {
        self.theta
    }

    pub fn rho(&self) -> f64 {
        self.rho
    }
}

impl CircularDistribution for Cardioid {
    fn density(&self, t: f64) -> f64 {
        1.0 + 2.0 * self.rho * (TAU * (t - self.theta)).cos()
    }

    fn cdf(&self, t: f64) -> f64 {
        if t <= 0.0 {
            return 0.0;
        }
        if t >= 1.0 {
            return 1.0;
        }
        let s = (TAU * (t - self.theta)).sin() + (TAU * self.theta).sin();
        (t + self.rho / PI * s).clamp(0.0, 1.0)
    }

    fn quantile(&self, p: f64) -> Option<f64> {
        let p = p.clamp(0.0, 1.0);
        let (mut lo, mut hi) = (0.0f64, 1.0f64);
        for _ in 0..200 {
            if hi - lo <= 1e-15 {
                break;
            }
            let mid = 0.5 * (lo + hi);
            if self.cdf(mid) < p {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        Some(CirclePoint::new(0.5 * (lo + hi)).value())
    }

    fn sample_one(&self, rng: &mut dyn RngCore) -> CirclePoint {
        CirclePoint::new(self.quantile(unit_uniform(rng)).unwrap())
    }
}
