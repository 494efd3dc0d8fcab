//! Plain-text angle files: one observation per line, blank lines and
//! `#` comments ignored, values converted from the declared unit and
//! reduced to `[0, 1)` turns.

use std::path::Path;
use std::str::FromStr;

use crate::circle::CirclePoint;
use crate::error::{CotError, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum AngleUnit {
    #[default]
    Turns,
    Radians,
    Degrees,
}

impl AngleUnit {
    pub fn name(&self) -> &'static str {
        match self {
            AngleUnit::Turns => "turns",
            AngleUnit::Radians => "radians",
            AngleUnit::Degrees => "degrees",
        }
    }

    pub fn to_turns(&self, x: f64) -> f64 {
        match self {
            AngleUnit::Turns => x,
            AngleUnit::Radians => x / std::f64::consts::TAU,
            AngleUnit::Degrees => x / 360.0,
        }
    }
}

impl FromStr for AngleUnit {
    type Err = CotError;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "turns" | "turn" => Ok(AngleUnit::Turns),
            "radians" | "radian" | "rad" => Ok(AngleUnit::Radians),
            "degrees" | "degree" | "deg" => Ok(AngleUnit::Degrees),
            other => Err(CotError::InvalidParameter(format!(
                "unknown angle unit '{other}'; expected turns, radians, or degrees"
            ))),
        }
    }
}

/// Parses angle-file text. Line numbers in errors are 1-based.
pub fn parse_angles(text: &str, unit: AngleUnit) -> Result<Vec<CirclePoint>> {
    let mut points = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let value: f64 = line.parse().map_err(|_| CotError::AngleParse {
            line: idx + 1,
            content: raw.trim_end().to_string(),
        })?;
        if !value.is_finite() {
            return Err(CotError::AngleParse {
                line: idx + 1,
                content: raw.trim_end().to_string(),
            });
        }
        points.push(CirclePoint::new(unit.to_turns(value)));
    }
    Ok(points)
}

/// Reads and parses a whole angle file.
pub fn read_angle_file(path: &Path, unit: AngleUnit) -> Result<Vec<CirclePoint>> {
    let text = std::fs::read_to_string(path).map_err(|source| CotError::File {
        path: path.display().to_string(),
        source,
    })?;
    parse_angles(&text, unit)
}
