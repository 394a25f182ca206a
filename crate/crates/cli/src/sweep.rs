//! Parameter sweeps over `log10(M)`.

use std::str::FromStr;

use serde::Serialize;

use qi_fading::SystemParams;

use crate::error::{CliError, CliResult};

/// Default number of grid points on a log-range sweep.
pub const DEFAULT_POINTS: usize = 51;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Axis {
    Log10M,
}

/// `START:STOP:POINTS` on the exponent axis.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LogRange {
    pub start: f64,
    pub stop: f64,
    pub points: usize,
}

impl LogRange {
    pub fn values(&self) -> Vec<f64> {
        if self.points == 1 {
            return vec![self.start];
        }
        let step = (self.stop - self.start) / (self.points - 1) as f64;
        (0..self.points)
            .map(|i| {
                if i + 1 == self.points {
                    self.stop
                } else {
                    self.start + i as f64 * step
                }
            })
            .collect()
    }
}

impl FromStr for LogRange {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let parts: Vec<&str> = s.split(':').collect();
        let [start, stop, points] = parts[..] else {
            return Err(format!("expected START:STOP:POINTS, got `{s}`"));
        };
        let num = |t: &str| t.trim().parse::<f64>().map_err(|e| format!("`{t}`: {e}"));
        Ok(Self {
            start: num(start)?,
            stop: num(stop)?,
            points: points.trim().parse().map_err(|e| format!("`{points}`: {e}"))?,
        })
    }
}

/// Axis, grid and the parameters held fixed.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepSpec {
    pub axis: Axis,
    values: Vec<f64>,
    pub fixed: SystemParams,
}

impl SweepSpec {
    /// Rejects empty, non-finite or non-increasing grids.
    pub fn new(axis: Axis, values: Vec<f64>, fixed: SystemParams) -> CliResult<Self> {
        if values.is_empty() {
            return Err(CliError::invalid("values", "sweep needs at least one point"));
        }
        if let Some(v) = values.iter().find(|v| !v.is_finite()) {
            return Err(CliError::invalid("values", format!("non-finite grid value {v}")));
        }
        if let Some(w) = values.windows(2).find(|w| w[1] <= w[0]) {
            return Err(CliError::invalid(
                "values",
                format!("grid must be strictly increasing ({} then {})", w[0], w[1]),
            ));
        }
        Ok(Self { axis, values, fixed })
    }

    pub fn from_range(axis: Axis, range: LogRange, fixed: SystemParams) -> CliResult<Self> {
        if range.points == 0 {
            return Err(CliError::invalid("points", "must be >= 1"));
        }
        Self::new(axis, range.values(), fixed)
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// Fixed parameters with the axis set to `value`.
    pub fn params_at(&self, value: f64) -> CliResult<SystemParams> {
        match self.axis {
            Axis::Log10M => Ok(self.fixed.with_m(10f64.powf(value))?),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use qi_fading::Preset;

    #[test]
    fn range_parsing() {
        let r: LogRange = "5:10:51".parse().unwrap();
        let v = r.values();
        assert_eq!(v.len(), 51);
        assert_eq!(v[0], 5.0);
        assert_eq!(v[50], 10.0);
        assert!("5:10".parse::<LogRange>().is_err());
        assert!("a:10:3".parse::<LogRange>().is_err());
    }

    #[test]
    fn grid_invariants() {
        let p = Preset::Fig3a.params();
        assert!(SweepSpec::new(Axis::Log10M, vec![], p).is_err());
        assert!(SweepSpec::new(Axis::Log10M, vec![6.0, 6.0], p).is_err());
        assert!(SweepSpec::new(Axis::Log10M, vec![7.0, 6.0], p).is_err());
        let one = SweepSpec::new(Axis::Log10M, vec![8.5], p).unwrap();
        assert_eq!(one.values(), &[8.5]);
        assert!((one.params_at(8.5).unwrap().m() - 10f64.powf(8.5)).abs() < 1e-3);
        let r = LogRange {
            start: 5.0,
            stop: 6.0,
            points: 0,
        };
        assert!(SweepSpec::from_range(Axis::Log10M, r, p).is_err());
    }
}
