use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

fn default_points() -> usize {
    30
}

/// Equally spaced grid on `[mu - 3 sigma, mu + 3 sigma]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct QuantizerConfig {
    pub mu: f64,
    pub sigma: f64,
    #[serde(default = "default_points")]
    pub n_points: usize,
}

impl QuantizerConfig {
    pub fn new(mu: f64, sigma: f64, n_points: usize) -> Result<Self> {
        let c = QuantizerConfig { mu, sigma, n_points };
        c.validate()?;
        Ok(c)
    }

    pub fn validate(&self) -> Result<()> {
        if !self.mu.is_finite() || !(self.sigma > 0.0 && self.sigma.is_finite()) {
            return Err(Error::config(format!("need finite mu and positive sigma, got mu={} sigma={}", self.mu, self.sigma)));
        }
        if self.n_points == 0 {
            return Err(Error::config("n_points must be positive"));
        }
        if self.n_points > 1 && !(self.sigma * 6.0 / (self.n_points - 1) as f64 > 0.0) {
            return Err(Error::config("grid spacing underflows"));
        }
        Ok(())
    }

    pub fn grid(&self) -> Vec<f64> {
        let n = self.n_points;
        if n == 1 {
            return vec![self.mu];
        }
        let d = (n - 1) as f64;
        // written symmetrically so that mirrored points are exact negatives
        (0..n).map(|i| self.mu + self.sigma * (3.0 * (2.0 * i as f64 - d)) / d).collect()
    }
}

/// Index of the nearest grid point; out-of-range values clamp to the ends and
/// exact midpoints go to the lower point.
pub fn quantize(value: f64, config: &QuantizerConfig) -> Result<usize> {
    config.validate()?;
    nearest(value, &config.grid())
}

pub fn quantize_all(values: &[f64], config: &QuantizerConfig) -> Result<Vec<usize>> {
    config.validate()?;
    let grid = config.grid();
    values.iter().map(|&v| nearest(v, &grid)).collect()
}

fn nearest(value: f64, grid: &[f64]) -> Result<usize> {
    if !value.is_finite() {
        return Err(Error::domain(format!("cannot quantize {value}")));
    }
    let last = grid.len() - 1;
    if value <= grid[0] {
        return Ok(0);
    }
    if value >= grid[last] {
        return Ok(last);
    }
    let hi = grid.partition_point(|&g| g <= value);
    let lo = hi - 1;
    Ok(if value - grid[lo] <= grid[hi] - value { lo } else { hi })
}
