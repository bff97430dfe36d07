//! Run configuration: defaults, config file, environment, flags.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use pellian::{Error, Precision, Result};
use serde::Serialize;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    Json,
    Csv,
    Text,
}

impl std::str::FromStr for OutputFormat {
    type Err = String;
    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "json" => Ok(OutputFormat::Json),
            "csv" => Ok(OutputFormat::Csv),
            "text" => Ok(OutputFormat::Text),
            other => Err(format!("unknown format {other}; use json, csv or text")),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct RunConfig {
    pub precision_start: u32,
    pub precision_ceiling: u32,
    pub y_cap: u64,
    pub q_max: u64,
    pub format: OutputFormat,
    pub seed: u64,
    /// Wall-clock timing in reports; off by default so identical
    /// invocations produce byte-identical output.
    pub timing: bool,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            precision_start: 128,
            precision_ceiling: 8192,
            y_cap: 10_000,
            q_max: 10_000,
            format: OutputFormat::Json,
            seed: 0,
            timing: false,
        }
    }
}

impl RunConfig {
    pub fn precision(&self) -> Result<Precision> {
        Precision::new(self.precision_start, self.precision_ceiling)
    }

    /// Apply `key = value` lines from a config file.
    pub fn apply_file(&mut self, text: &str) -> Result<()> {
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (key, value) = line.split_once('=').ok_or_else(|| {
                Error::InvalidArgument(format!("config line {}: expected key = value", lineno + 1))
            })?;
            let key = key.trim();
            let value = value.trim();
            let bad = |what: &str| {
                Error::InvalidArgument(format!("config line {}: bad {what}: {value}", lineno + 1))
            };
            match key {
                "precision_start" => {
                    self.precision_start = value.parse().map_err(|_| bad("precision_start"))?
                }
                "precision_ceiling" => {
                    self.precision_ceiling = value.parse().map_err(|_| bad("precision_ceiling"))?
                }
                "y_cap" => self.y_cap = value.parse().map_err(|_| bad("y_cap"))?,
                "q_max" => self.q_max = value.parse().map_err(|_| bad("q_max"))?,
                "format" => self.format = value.parse().map_err(|_| bad("format"))?,
                "seed" => self.seed = value.parse().map_err(|_| bad("seed"))?,
                other => {
                    return Err(Error::InvalidArgument(format!(
                        "config line {}: unknown key {other}",
                        lineno + 1
                    )))
                }
            }
        }
        Ok(())
    }

    pub fn apply_env(&mut self) -> Result<()> {
        if let Ok(v) = std::env::var("PELLIAN_PRECISION_CEILING") {
            self.precision_ceiling = v.parse().map_err(|_| {
                Error::InvalidArgument(format!("PELLIAN_PRECISION_CEILING: bad value {v}"))
            })?;
        }
        Ok(())
    }
}

/// Parse an exact rational from decimal, scientific, or fraction notation:
/// `1.913`, `1e-7`, `3/4`, `-0.5e2`. Never touches floating point.
pub fn parse_exact_ratio(s: &str) -> Result<(BigInt, BigInt)> {
    let s = s.trim();
    let bad = || Error::InvalidArgument(format!("not an exact rational: {s}"));
    if let Some((num, den)) = s.split_once('/') {
        let n: BigInt = num.trim().parse().map_err(|_| bad())?;
        let d: BigInt = den.trim().parse().map_err(|_| bad())?;
        if d.is_zero() {
            return Err(bad());
        }
        return Ok(if d.is_negative() { (-n, -d) } else { (n, d) });
    }
    let (mantissa, exp10) = match s.split_once(['e', 'E']) {
        Some((m, e)) => (m, e.parse::<i64>().map_err(|_| bad())?),
        None => (s, 0i64),
    };
    let (neg, mantissa) = match mantissa.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, mantissa.strip_prefix('+').unwrap_or(mantissa)),
    };
    let (int_part, frac_part) = match mantissa.split_once('.') {
        Some((i, f)) => (i, f),
        None => (mantissa, ""),
    };
    if int_part.is_empty() && frac_part.is_empty() {
        return Err(bad());
    }
    if !int_part.chars().all(|c| c.is_ascii_digit()) || !frac_part.chars().all(|c| c.is_ascii_digit()) {
        return Err(bad());
    }
    let digits: BigInt = format!("{int_part}{frac_part}").parse().map_err(|_| bad())?;
    let digits = if neg { -digits } else { digits };
    let scale = exp10 - frac_part.len() as i64;
    let (num, den) = if scale >= 0 {
        (digits * BigInt::from(10).pow(scale as u32), BigInt::one())
    } else {
        (digits, BigInt::from(10).pow((-scale) as u32))
    };
    Ok((num, den))
}
