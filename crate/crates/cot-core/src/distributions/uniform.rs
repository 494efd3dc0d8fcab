use super::CircularDistribution;
use crate::circle::CirclePoint;
use crate::rng::unit_uniform;
use rand::RngCore;

/// The uniform distribution on the circle.
#[derive(Debug, Clone, Copy, Default)]
pub struct Uniform;

impl CircularDistribution for Uniform {
    fn density(&self, _t: f64) -> f64 {
        1.0
    }

    fn cdf(&self, t: f64) -> f64 {
        t.clamp(0.0, 1.0)
    }

    fn quantile(&self, p: f64) -> Option<f64> {
        Some(CirclePoint::new(p.clamp(0.0, 1.0)).value())
    }

    fn sample_one(&self, rng: &mut dyn RngCore) -> CirclePoint {
        CirclePoint::new(unit_uniform(rng))
    }
}
