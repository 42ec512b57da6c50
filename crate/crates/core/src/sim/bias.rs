//! Constant bias under growing sample size.
//!
//! A study measures `M = T + B`: the true value plus a fixed bias. The
//! standard error shrinks like `sigma / sqrt(n)`, so `z = (T + B)/SE` grows
//! without bound even when `T = 0`, and p-values collapse toward zero.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::rng::{DrawStream, Purpose};
use super::summary::SimSummary;
use crate::error::{Error, Result};
use crate::inference::{two_sided_p, DEFAULT_ALPHA};
use crate::special::inverse_normal_cdf;

fn default_alpha() -> f64 {
    DEFAULT_ALPHA
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BiasModelConfig {
    #[serde(rename = "T")]
    pub true_effect: f64,
    #[serde(rename = "B")]
    pub bias: f64,
    /// Per-observation standard deviation.
    pub sigma: f64,
    /// Sample size.
    pub n: u64,
    /// Significance line for `frac_below_alpha` in summaries.
    #[serde(default = "default_alpha")]
    pub alpha: f64,
}

impl BiasModelConfig {
    pub fn new(true_effect: f64, bias: f64, sigma: f64, n: u64) -> Self {
        BiasModelConfig {
            true_effect,
            bias,
            sigma,
            n,
            alpha: DEFAULT_ALPHA,
        }
    }

    pub fn with_n(self, n: u64) -> Self {
        BiasModelConfig { n, ..self }
    }

    pub fn se(&self) -> f64 {
        self.sigma / (self.n as f64).sqrt()
    }

    pub fn validate(&self) -> Result<()> {
        if !self.true_effect.is_finite() || !self.bias.is_finite() {
            return Err(Error::InvalidConfig("T and B must be finite".into()));
        }
        if !(self.sigma > 0.0 && self.sigma.is_finite()) {
            return Err(Error::InvalidConfig(format!(
                "sigma must be > 0, got {}",
                self.sigma
            )));
        }
        if self.n < 1 {
            return Err(Error::InvalidConfig("n must be >= 1".into()));
        }
        if !(self.alpha > 0.0 && self.alpha < 1.0) {
            return Err(Error::InvalidConfig(format!(
                "alpha must be in (0, 1), got {}",
                self.alpha
            )));
        }
        Ok(())
    }
}

/// `M = T + B`.
pub fn measured_effect(true_effect: f64, bias: f64) -> f64 {
    true_effect + bias
}

/// `(T + B) / (sigma / sqrt(n))`.
pub fn expected_z(c: &BiasModelConfig) -> f64 {
    measured_effect(c.true_effect, c.bias) * (c.n as f64).sqrt() / c.sigma
}

/// One simulated study: estimate ~ Normal(T + B, se), reported as a
/// two-sided p-value. A pure function of `(c, seed, rep_index)`; the
/// normal draw is the inverse CDF of one counter-addressed uniform, so the
/// same replicate shares its draw across sample sizes.
pub fn simulate_study_p(c: &BiasModelConfig, seed: u64, rep_index: u64) -> f64 {
    let u = DrawStream::new(seed, rep_index, 0, Purpose::Study).next_open01();
    let se = c.se();
    let estimate = measured_effect(c.true_effect, c.bias) + se * inverse_normal_cdf(u);
    two_sided_p(estimate / se)
}

/// Replicates `0..reps` of [`simulate_study_p`], in replicate order.
pub fn simulate_p_values(c: &BiasModelConfig, seed: u64, reps: usize) -> Vec<f64> {
    (0..reps as u64)
        .into_par_iter()
        .map(|r| simulate_study_p(c, seed, r))
        .collect()
}

/// Summaries of `reps` simulated p-values at each sample size in `n_grid`.
pub fn bias_curve(
    c: &BiasModelConfig,
    n_grid: &[u64],
    reps: usize,
    seed: u64,
) -> Result<Vec<(u64, SimSummary)>> {
    if n_grid.is_empty() {
        return Err(Error::InvalidGrid("sample-size grid is empty".into()));
    }
    if n_grid[0] < 1 {
        return Err(Error::InvalidGrid("sample sizes must be >= 1".into()));
    }
    if n_grid.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::InvalidGrid(
            "sample-size grid must be strictly increasing".into(),
        ));
    }
    if reps < 100 {
        return Err(Error::InvalidConfig(format!(
            "bias curve needs at least 100 replicates, got {reps}"
        )));
    }
    c.with_n(n_grid[0]).validate()?;
    Ok(n_grid
        .iter()
        .map(|&n| {
            let cfg = c.with_n(n);
            let ps = simulate_p_values(&cfg, seed, reps);
            (n, SimSummary::from_p_values(ps, c.alpha))
        })
        .collect())
}
