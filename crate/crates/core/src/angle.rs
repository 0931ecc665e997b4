//! Angle literals: plain radians (`1.8`) or multiples of pi (`pi`, `-pi/2`, `3pi/4`, `0.5*pi`).

use std::f64::consts::PI;

use crate::error::{Error, Result};

pub fn parse_angle(text: &str) -> Result<f64> {
    let s = text.trim();
    let bad = || Error::Parse(format!("invalid angle literal `{text}`"));
    let Some(pi_at) = s.find("pi") else {
        return s.parse::<f64>().map_err(|_| bad());
    };

    let head = s[..pi_at].trim_end_matches('*').trim();
    let tail = s[pi_at + 2..].trim();
    let coefficient = match head {
        "" | "+" => 1.0,
        "-" => -1.0,
        h => h.parse::<f64>().map_err(|_| bad())?,
    };
    let denominator = if tail.is_empty() {
        1.0
    } else {
        let d = tail.strip_prefix('/').ok_or_else(bad)?.trim();
        let d = d.parse::<f64>().map_err(|_| bad())?;
        if d == 0.0 {
            return Err(bad());
        }
        d
    };
    let value = coefficient * PI / denominator;
    if value.is_finite() {
        Ok(value)
    } else {
        Err(bad())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pi_multiples() {
        assert_eq!(parse_angle("pi").unwrap(), PI);
        assert_eq!(parse_angle("pi/2").unwrap(), PI / 2.0);
        assert_eq!(parse_angle("-pi/2").unwrap(), -PI / 2.0);
        assert_eq!(parse_angle("3pi/4").unwrap(), 3.0 * PI / 4.0);
        assert_eq!(parse_angle("2*pi").unwrap(), 2.0 * PI);
        assert_eq!(parse_angle(" 0.5pi ").unwrap(), 0.5 * PI);
    }

    #[test]
    fn plain_radians() {
        assert_eq!(parse_angle("1.8").unwrap(), 1.8);
        assert_eq!(parse_angle("-0").unwrap(), 0.0);
    }

    #[test]
    fn rejects_garbage() {
        for s in ["", "pie", "pi/0", "pi/x", "x pi", "3pi4"] {
            assert!(parse_angle(s).is_err(), "{s}");
        }
    }
}
