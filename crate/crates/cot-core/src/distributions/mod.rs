//! Parametric families of circular distributions.
//!
//! Everything is parameterized in turns: densities are taken with respect to
//! arc length on `[0, 1)` and integrate to 1 over one revolution.

mod cardioid;
mod stephens;
mod uniform;
mod von_mises;
mod wrapped_cauchy;

pub use cardioid::Cardioid;
pub use stephens::Stephens;
pub use uniform::Uniform;
pub use von_mises::VonMises;
pub use wrapped_cauchy::WrappedCauchy;

use crate::circle::CirclePoint;
use crate::error::{CotError, Result};
use rand::RngCore;

/// A continuous probability distribution on the circle.
pub trait CircularDistribution: Send + Sync {
    /// Density at `t`, in turns.
    fn density(&self, t: f64) -> f64;

    /// Mass of `[0, t]` for `t` in `[0, 1]`; `cdf(1)` is always 1.
    fn cdf(&self, t: f64) -> f64;

    /// Inverse of the cdf, when the family supports it. Returns a value in
    /// `[0, 1)`; `p = 1` wraps to the same point as `p = 0`.
    fn quantile(&self, p: f64) -> Option<f64>;

    fn sample_one(&self, rng: &mut dyn RngCore) -> CirclePoint;

    fn sample(&self, rng: &mut dyn RngCore, n: usize) -> Vec<CirclePoint> {
        (0..n).map(|_| self.sample_one(rng)).collect()
    }

    /// `cdf(i/D)` for `i = 1..=D`.
    ///
    /// Families whose cdf needs quadrature override this with an incremental
    /// scheme; the default just evaluates pointwise.
    fn cdf_grid(&self, resolution: usize) -> Vec<f64> {
        let d = resolution as f64;
        (1..=resolution).map(|i| self.cdf(i as f64 / d)).collect()
    }
}

/// A named family with parameters, as written on a command line:
/// `uniform`, `vonmises:THETA,KAPPA`, `stephens:M,L`,
/// `wrappedcauchy:THETA,RHO`, or `cardioid:THETA,RHO`.
#[derive(Debug, Clone, PartialEq)]
pub enum Family {
    Uniform,
    VonMises { theta: f64, kappa: f64 },
    Stephens { modes: u32, concentration: f64 },
    WrappedCauchy { theta: f64, rho: f64 },
    Cardioid { theta: f64, rho: f64 },
}

impl Family {
    pub fn build(&self) -> Result<Box<dyn CircularDistribution>> {
        Ok(match *self {
            Family::Uniform => Box::new(Uniform),
            Family::VonMises { theta, kappa } => Box::new(VonMises::new(theta, kappa)?),
            Family::Stephens {
                modes,
                concentration,
            } => Box::new(Stephens::new(modes, concentration)?),
            Family::WrappedCauchy { theta, rho } => Box::new(WrappedCauchy::new(theta, rho)?),
            Family::Cardioid { theta, rho } => Box::new(Cardioid::new(theta, rho)?),
        })
    }

    pub fn label(&self) -> String {
        match *self {
            Family::Uniform => "uniform".into(),
            Family::VonMises { theta, kappa } => format!("vonmises:{theta},{kappa}"),
            Family::Stephens {
                modes,
                concentration,
            } => format!("stephens:{modes},{concentration}"),
            Family::WrappedCauchy { theta, rho } => format!("wrappedcauchy:{theta},{rho}"),
            Family::Cardioid { theta, rho } => format!("cardioid:{theta},{rho}"),
        }
    }
}

impl std::str::FromStr for Family {
    type Err = CotError;

    fn from_str(s: &str) -> Result<Family> {
        let (name, args) = match s.split_once(':') {
            Some((n, a)) => (n.trim(), Some(a)),
            None => (s.trim(), None),
        };
        let parse_pair = |args: Option<&str>| -> Result<(f64, f64)> {
            let raw = args.ok_or_else(|| {
                CotError::InvalidParameter(format!("family {name:?} needs parameters after ':'"))
            })?;
            let mut it = raw.split(',').map(str::trim);
            let a = it.next().unwrap_or("");
            let b = it.next().ok_or_else(|| {
                CotError::InvalidParameter(format!("family {name:?} takes exactly two parameters"))
            })?;
            if it.next().is_some() {
                return Err(CotError::InvalidParameter(format!(
                    "family {name:?} takes exactly two parameters"
                )));
            }
            let pa: f64 = a
                .parse()
                .map_err(|_| CotError::InvalidParameter(format!("bad number {a:?}")))?;
            let pb: f64 = b
                .parse()
                .map_err(|_| CotError::InvalidParameter(format!("bad number {b:?}")))?;
            Ok((pa, pb))
        };
        match name.to_ascii_lowercase().as_str() {
            "uniform" => {
                if args.is_some() {
                    return Err(CotError::InvalidParameter(
                        "uniform takes no parameters".into(),
                    ));
                }
                Ok(Family::Uniform)
            }
            "vonmises" => {
                let (theta, kappa) = parse_pair(args)?;
                Ok(Family::VonMises { theta, kappa })
            }
            "stephens" => {
                let (m, l) = parse_pair(args)?;
                if m.fract() != 0.0 || !(m >= 1.0) || m > u32::MAX as f64 {
                    return Err(CotError::InvalidParameter(format!(
                        "stephens mode count must be a positive integer, got {m}"
                    )));
                }
                Ok(Family::Stephens {
                    modes: m as u32,
                    concentration: l,
                })
            }
            "wrappedcauchy" => {
                let (theta, rho) = parse_pair(args)?;
                Ok(Family::WrappedCauchy { theta, rho })
            }
            "cardioid" => {
                let (theta, rho) = parse_pair(args)?;
                Ok(Family::Cardioid { theta, rho })
            }
            other => Err(CotError::InvalidParameter(format!(
                "unknown family {other:?}; expected uniform, vonmises, stephens, wrappedcauchy, or cardioid"
            ))),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_family_strings() {
        assert_eq!("uniform".parse::<Family>().unwrap(), Family::Uniform);
        assert_eq!(
            "vonmises:0.5,2".parse::<Family>().unwrap(),
            Family::VonMises {
                theta: 0.5,
                kappa: 2.0
            }
        );
        assert_eq!(
            "stephens:2,3.5".parse::<Family>().unwrap(),
            Family::Stephens {
                modes: 2,
                concentration: 3.5
            }
        );
        assert!("vonmises".parse::<Family>().is_err());
        assert!("vonmises:1,2,3".parse::<Family>().is_err());
        assert!("stephens:0.5,2".parse::<Family>().is_err());
        assert!("gauss:1,2".parse::<Family>().is_err());
        assert!("uniform:3".parse::<Family>().is_err());
    }

    #[test]
    fn label_round_trips() {
        for s in [
            "uniform",
            "vonmises:0.5,2",
            "stephens:2,3.5",
            "wrappedcauchy:0.5,0.3",
            "cardioid:0.25,0.4",
        ] {
            let f: Family = s.parse().unwrap();
            assert_eq!(f.label().parse::<Family>().unwrap(), f);
        }
    }
}
