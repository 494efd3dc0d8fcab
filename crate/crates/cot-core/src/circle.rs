//! Points on the unit circle, parameterized by [0, 1) in turns.

/// A point on the circle, stored as a fraction of a full turn in `[0, 1)`.
///
/// Construction reduces any finite real modulo 1, so `-0.25` and `0.75`
/// denote the same point.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct CirclePoint(f64);

impl CirclePoint {
    /// Wraps `t` into `[0, 1)`.
    ///
    /// Panics if `t` is not finite.
    pub fn new(t: f64) -> Self {
        assert!(t.is_finite(), "circle point must be finite, got {t}");
        let mut v = t.rem_euclid(1.0);
        // rem_euclid can round up to exactly 1.0 for tiny negative inputs
        if v >= 1.0 {
            v = 0.0;
        }
        CirclePoint(v)
    }

    pub fn value(self) -> f64 {
        self.0
    }
}

impl From<CirclePoint> for f64 {
    fn from(p: CirclePoint) -> f64 {
        p.0
    }
}

/// Shortest arc length between two points, in turns.
///
/// Always lies in `[0, 1/2]`; antipodal points attain the maximum.
pub fn geodesic_distance(a: CirclePoint, b: CirclePoint) -> f64 {
    let d = (a.0 - b.0).abs();
    d.min(1.0 - d)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn wraps_negative_and_large_values() {
        assert_eq!(CirclePoint::new(-0.25).value(), 0.75);
        assert_eq!(CirclePoint::new(1.25).value(), 0.25);
        assert_eq!(CirclePoint::new(3.0).value(), 0.0);
        assert_eq!(CirclePoint::new(0.0).value(), 0.0);
    }

    #[test]
    fn tiny_negative_does_not_round_to_one() {
        let p = CirclePoint::new(-1e-18);
        assert!(p.value() < 1.0);
    }

    #[test]
    fn geodesic_takes_shorter_arc() {
        let d = geodesic_distance(CirclePoint::new(0.1), CirclePoint::new(0.9));
        assert!((d - 0.2).abs() < 1e-15);
        let half = geodesic_distance(CirclePoint::new(0.0), CirclePoint::new(0.5));
        assert_eq!(half, 0.5);
    }

    #[test]
    #[should_panic]
    fn rejects_nan() {
        CirclePoint::new(f64::NAN);
    }
}
