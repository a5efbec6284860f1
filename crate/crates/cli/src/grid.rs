//! Parameter values given as a scalar or as `start:stop:count`.

use std::f64::consts::PI;
use std::fmt;

use serde::Deserialize;

use crate::error::{CliError, CliResult};

/// Axes that can be swept.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, clap::ValueEnum, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Axis {
    Tau,
    Theta,
    T,
}

impl Axis {
    pub const ALL: [Axis; 3] = [Axis::Tau, Axis::Theta, Axis::T];

    pub fn name(self) -> &'static str {
        match self {
            Axis::Tau => "tau",
            Axis::Theta => "theta",
            Axis::T => "t",
        }
    }
}

impl fmt::Display for Axis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// A number, optionally written with `pi`: `1.5`, `pi`, `-pi/4`, `2pi/3`, `0.5pi`.
pub fn parse_number(s: &str) -> Result<f64, String> {
    let s = s.trim();
    if let Some((num, den)) = s.split_once('/') {
        let den: f64 = den.trim().parse().map_err(|_| format!("bad denominator in {s:?}"))?;
        return Ok(parse_number(num)? / den);
    }
    if let Some(coef) = s.strip_suffix("pi") {
        let coef = coef.trim().trim_end_matches('*');
        let c = match coef {
            "" | "+" => 1.0,
            "-" => -1.0,
            c => c.parse::<f64>().map_err(|_| format!("bad number {s:?}"))?,
        };
        return Ok(c * PI);
    }
    s.parse::<f64>().map_err(|_| format!("bad number {s:?}"))
}

/// Raw value of a grid-capable setting, from a flag or a config file.
#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(untagged)]
pub enum ValueSpec {
    Number(f64),
    Text(String),
}

impl ValueSpec {
    /// Expands to the listed values; `start:stop:count` is inclusive of both ends.
    pub fn values(&self) -> Result<Vec<f64>, String> {
        let text = match self {
            ValueSpec::Number(x) => return finite(*x).map(|x| vec![x]),
            ValueSpec::Text(s) => s,
        };
        let parts: Vec<&str> = text.split(':').collect();
        match parts.as_slice() {
            [one] => finite(parse_number(one)?).map(|x| vec![x]),
            [a, b, n] => {
                let (a, b) = (finite(parse_number(a)?)?, finite(parse_number(b)?)?);
                let n: usize = n
                    .trim()
                    .parse()
                    .map_err(|_| format!("bad point count in {text:?}"))?;
                linspace(a, b, n)
            }
            _ => Err(format!("expected a number or start:stop:count, got {text:?}")),
        }
    }

    pub fn is_grid(&self) -> bool {
        matches!(self, ValueSpec::Text(s) if s.contains(':'))
    }

    pub fn scalar(&self, name: &str) -> CliResult<f64> {
        let v = self.values().map_err(|e| CliError::usage(format!("--{name}: {e}")))?;
        match v.as_slice() {
            [x] => Ok(*x),
            _ => Err(CliError::usage(format!("--{name} takes a single value here"))),
        }
    }
}

impl From<&str> for ValueSpec {
    fn from(s: &str) -> Self {
        ValueSpec::Text(s.to_string())
    }
}

fn finite(x: f64) -> Result<f64, String> {
    if x.is_finite() {
        Ok(x)
    } else {
        Err(format!("{x} is not finite"))
    }
}

fn linspace(a: f64, b: f64, n: usize) -> Result<Vec<f64>, String> {
    match n {
        0 => Err("a grid needs at least one point".into()),
        1 if a == b => Ok(vec![a]),
        1 => Err(format!("one-point grid needs start == stop, got {a}:{b}")),
        _ if b <= a => Err(format!("grid must increase, got {a}:{b}")),
        _ => {
            let step = (b - a) / (n - 1) as f64;
            let mut v: Vec<f64> = (0..n).map(|i| a + step * i as f64).collect();
            v[n - 1] = b;
            Ok(v)
        }
    }
}

/// Values of one swept parameter; nonempty and strictly increasing.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepGrid {
    axis: Axis,
    values: Vec<f64>,
}

impl SweepGrid {
    pub fn new(axis: Axis, values: Vec<f64>) -> CliResult<Self> {
        if values.is_empty() {
            return Err(CliError::usage(format!("{axis} grid is empty")));
        }
        if values.windows(2).any(|w| !(w[1] > w[0])) {
            return Err(CliError::usage(format!("{axis} grid must be strictly increasing")));
        }
        Ok(Self { axis, values })
    }

    pub fn parse(axis: Axis, spec: &ValueSpec) -> CliResult<Self> {
        let v = spec
            .values()
            .map_err(|e| CliError::usage(format!("--{axis}: {e}")))?;
        Self::new(axis, v)
    }

    pub fn axis(&self) -> Axis {
        self.axis
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }
}
