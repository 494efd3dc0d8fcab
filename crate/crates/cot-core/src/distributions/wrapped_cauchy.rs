use super::CircularDistribution;
use crate::circle::CirclePoint;
use crate::error::{CotError, Result};
use crate::rng::unit_uniform;
use rand::RngCore;
use std::f64::consts::{PI, TAU};

/// Wrapped Cauchy distribution with mode `theta` (turns) and concentration
/// `rho` in `[0, 1)`.
///
/// Density in turns: `(1 - rho^2) / (1 + rho^2 - 2 rho cos(2 pi (t - theta)))`.
/// Both the cdf and the quantile are closed-form through the arctangent
/// antiderivative, so sampling is by inversion.
#[derive(Debug, Clone, Copy)]
pub struct WrappedCauchy {
    theta: f64,
    rho: f64,
    /// (1 + rho) / (1 - rho), the slope of the arctangent substitution.
    c: f64,
}

impl WrappedCauchy {
    pub fn new(theta: f64, rho: f64) -> Result<Self> {
        if !theta.is_finite() {
            return Err(CotError::InvalidParameter(format!(
                "wrapped Cauchy location must be finite, got {theta}"
            )));
        }
        if !rho.is_finite() || !(0.0..1.0).contains(&rho) {
            return Err(CotError::InvalidParameter(format!(
                "wrapped Cauchy concentration must lie in [0, 1), got {rho}"
            )));
        }
        Ok(WrappedCauchy {
            theta: CirclePoint::new(theta).value(),
            rho,
            c: (1.0 + rho) / (1.0 - rho),
        })
    }

    pub fn theta(&self) -> f64 {
        self.theta
    }

    pub fn rho(&self) -> f64 {
        self.rho
    }

    /// Mass of the centered distribution over `[0, x]` for `x` in
    /// `[-1/2, 1/2]`, shifted so that `g(0) = 0` and `g(+-1/2) = +-1/2`.
    fn g(&self, x: f64) -> f64 {
        if x >= 0.5 {
            0.5
        } else if x <= -0.5 {
            -0.5
        } else {
            (self.c * (PI * x).tan()).atan() / PI
        }
    }

    fn g_inv(&self, v: f64) -> f64 {
        if v >= 0.5 {
            0.5
        } else if v <= -0.5 {
            -0.5
        } else {
            ((PI * v).tan() / self.c).atan() / PI
        }
    }

    /// Continuous antiderivative of the centered density on the whole line;
    /// increases by 1 per turn.
    fn big_g(&self, x: f64) -> f64 {
        let n = x.round();
        n + self.g(x - n)
    }

    fn big_g_inv(&self, y: f64) -> f64 {
        let n = y.round();
        n + self.g_inv(y - n)
    }
}

impl CircularDistribution for WrappedCauchy {
    fn density(&self, t: f64) -> f64 {
        let r = self.rho;
        (1.0 - r * r) / (1.0 + r * r - 2.0 * r * (TAU * (t - self.theta)).cos())
    }

    fn cdf(&self, t: f64) -> f64 {
        if t <= 0.0 {
            return 0.0;
        }
        if t >= 1.0 {
            return 1.0;
        }
        (self.big_g(t - self.theta) - self.big_g(-self.theta)).clamp(0.0, 1.0)
    }

    fn quantile(&self, p: f64) -> Option<f64> {
        let p = p.clamp(0.0, 1.0);
        let t = self.theta + self.big_g_inv(p + self.big_g(-self.theta));
        Some(CirclePoint::new(t).value())
    }

    fn sample_one(&self, rng: &mut dyn RngCore) -> CirclePoint {
        CirclePoint::new(self.quantile(unit_uniform(rng)).unwrap())
    }
}
