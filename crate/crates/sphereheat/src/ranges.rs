//! Numeric flag syntax.
//!
//! Integers: `7`, `1e3`, `0..20` (inclusive) or comma lists of those.
//! Reals: `0.5`, `2.5e-3`, `0.1:1.5:0.1` (inclusive when the end is hit up to
//! rounding) or comma lists of those.

use anyhow::{bail, Context, Result};

/// Slack when deciding whether the end of `a:b:step` is on the lattice.
const LATTICE_SLACK: f64 = 1e-9;

/// Nonnegative integer in decimal or scientific notation.
pub fn parse_count(s: &str) -> Result<usize> {
    let s = s.trim();
    if let Ok(v) = s.parse::<usize>() {
        return Ok(v);
    }
    let v: f64 = s.parse().with_context(|| format!("`{s}` is not a number"))?;
    if !(v >= 0.0 && v.fract() == 0.0 && v <= usize::MAX as f64) {
        bail!("`{s}` is not a nonnegative integer");
    }
    Ok(v as usize)
}

pub fn parse_real(s: &str) -> Result<f64> {
    let s = s.trim();
    let v: f64 = s.parse().with_context(|| format!("`{s}` is not a number"))?;
    if !v.is_finite() {
        bail!("`{s}` is not finite");
    }
    Ok(v)
}

/// `a..b`, single values and comma lists.
pub fn parse_int_range(s: &str) -> Result<Vec<usize>> {
    let mut out = Vec::new();
    for part in s.split(',') {
        match part.split_once("..") {
            Some((a, b)) => {
                let (a, b) = (parse_count(a)?, parse_count(b)?);
                if a > b {
                    bail!("empty range `{part}`");
                }
                out.extend(a..=b);
            }
            None => out.push(parse_count(part)?),
        }
    }
    Ok(out)
}

/// `a:b:step`, single values and comma lists.
pub fn parse_real_range(s: &str) -> Result<Vec<f64>> {
    let mut out = Vec::new();
    for part in s.split(',') {
        let fields: Vec<&str> = part.split(':').collect();
        match fields.as_slice() {
            [v] => out.push(parse_real(v)?),
            [a, b, step] => {
                let (a, b, step) = (parse_real(a)?, parse_real(b)?, parse_real(step)?);
                if step <= 0.0 || b < a {
                    bail!("malformed range `{part}`: need start <= end and step > 0");
                }
                let count = ((b - a) / step + LATTICE_SLACK).floor() as usize + 1;
                // multiply instead of accumulating so each value is a + k·step rounded once
                out.extend((0..count).map(|k| a + step * k as f64));
            }
            _ => bail!("malformed range `{part}`: expected a, or a:b:step"),
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn counts() {
        assert_eq!(parse_count("12").unwrap(), 12);
        assert_eq!(parse_count("1e3").unwrap(), 1000);
        assert_eq!(parse_count("2.5E1").unwrap(), 25);
        assert!(parse_count("2.5").is_err());
        assert!(parse_count("-1").is_err());
        assert!(parse_count("x").is_err());
    }

    #[test]
    fn integer_ranges() {
        assert_eq!(parse_int_range("0..3").unwrap(), vec![0, 1, 2, 3]);
        assert_eq!(parse_int_range("4").unwrap(), vec![4]);
        assert_eq!(parse_int_range("0..1,5,1e1").unwrap(), vec![0, 1, 5, 10]);
        assert!(parse_int_range("3..1").is_err());
        assert!(parse_int_range("0...2").is_err());
    }

    #[test]
    fn real_ranges() {
        let v = parse_real_range("0.1:1.5:0.1").unwrap();
        assert_eq!(v.len(), 15);
        assert_eq!(v[0], 0.1);
        assert!((v[14] - 1.5).abs() < 1e-15);
        assert_eq!(parse_real_range("1e-3").unwrap(), vec![1e-3]);
        assert_eq!(parse_real_range("0:1:0.5,2").unwrap(), vec![0.0, 0.5, 1.0, 2.0]);
        assert_eq!(parse_real_range("0:0.9:0.5").unwrap(), vec![0.0, 0.5]);
        assert!(parse_real_range("1:0:0.1").is_err());
        assert!(parse_real_range("0:1:0").is_err());
        assert!(parse_real_range("0:1").is_err());
        assert!(parse_real_range("nan").is_err());
    }
}
