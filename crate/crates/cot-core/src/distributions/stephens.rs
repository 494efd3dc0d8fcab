use super::CircularDistribution;
use crate::circle::CirclePoint;
use crate::error::{CotError, Result};
use crate::rng::unit_uniform;
use rand::RngCore;

/// Stephens' multimodal distribution with `modes` identical lobes per turn
/// and concentration `concentration` (written `M` and `L` below).
///
/// Each lobe occupies `[k/M, (k+1)/M)` and carries mass exactly `1/M`. With
/// `u` the offset into the lobe, the density rises as `L (2Mu)^(L-1)` on the
/// first half-lobe and falls back mirror-symmetrically on the second, so the
/// modes sit at the lobe centers `(2k+1)/(2M)` and the density vanishes at
/// the lobe boundaries for `L > 1`. `L = 1` is the uniform distribution.
///
/// The cdf and quantile are analytic lobe by lobe; in particular
/// `cdf(k/M) = k/M` holds exactly.
#[derive(Debug, Clone, Copy)]
pub struct Stephens {
    modes: u32,
    concentration: f64,
}

impl Stephens {
    pub fn new(modes: u32, concentration: f64) -> Result<Self> {
        if modes == 0 {
            return Err(CotError::InvalidParameter(
                "stephens mode count must be at least 1".into(),
            ));
        }
        if !concentration.is_finite() || concentration < 1.0 {
            return Err(CotError::InvalidParameter(format!(
                "stephens concentration must be finite and at least 1, got {concentration}"
            )));
        }
        Ok(Stephens {
            modes,
            concentration,
        })
    }

    pub fn modes(&self) -> u32 {
        self.modes
    }

    pub fn concentration(&self) -> f64 {
        self.concentration
    }

    /// Lobe index and scaled offset `s = 2Mu` in `[0, 2)`.
    fn locate(&self, t: f64) -> (f64, f64) {
        let m = self.modes as f64;
        let k = (t * m).floor().min(m - 1.0);
        let s = 2.0 * (t * m - k);
        (k, s)
    }
}

impl CircularDistribution for Stephens {
    fn density(&self, t: f64) -> f64 {
        let l = self.concentration;
        let (_, s) = self.locate(t.rem_euclid(1.0));
        if s < 1.0 {
            l * s.powf(l - 1.0)
        } else {
            l * (2.0 - s).powf(l - 1.0)
        }
    }

    fn cdf(&self, t: f64) -> f64 {
        if t <= 0.0 {
            return 0.0;
        }
        if t >= 1.0 {
            return 1.0;
        }
        let m = self.modes as f64;
        let l = self.concentration;
        let (k, s) = self.locate(t);
        let within = if s <= 1.0 {
            s.powf(l) / (2.0 * m)
        } else {
            1.0 / m - (2.0 - s).powf(l) / (2.0 * m)
        };
        (k / m + within).clamp(0.0, 1.0)
    }

    fn quantile(&self, p: f64) -> Option<f64> {
        let p = p.clamp(0.0, 1.0);
        let m = self.modes as f64;
        let l = self.concentration;
        let k = (p * m).floor().min(m - 1.0);
        let q = p - k / m; // mass inside the lobe, in [0, 1/M]
        let half = 1.0 / (2.0 * m);
        let t = if q <= half {
            let s = (2.0 * m * q).powf(1.0 / l);
            k / m + s / (2.0 * m)
        } else {
            let s = (2.0 * m * (1.0 / m - q)).powf(1.0 / l);
            k / m + (2.0 - s) / (2.0 * m)
        };
        Some(CirclePoint::new(t).value())
    }

    fn sample_one(&self, rng: &mut dyn RngCore) -> CirclePoint {
        let t = self
            .quantile(unit_uniform(rng))
            .expect("stephens quantile is always available");
        CirclePoint::new(t)
    }
}
