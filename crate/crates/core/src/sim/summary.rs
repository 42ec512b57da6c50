use std::collections::BTreeMap;

use serde::Serialize;

/// Quantile levels reported in every summary.
pub const SUMMARY_LEVELS: [f64; 5] = [0.05, 0.25, 0.5, 0.75, 0.95];

/// Linear-interpolation quantile (R type 7) of an ascending slice.
pub fn quantile_sorted(sorted: &[f64], level: f64) -> f64 {
    assert!(!sorted.is_empty());
    let h = (sorted.len() - 1) as f64 * level;
    let lo = h.floor() as usize;
    let hi = h.ceil() as usize;
    sorted[lo] + (h - lo as f64) * (sorted[hi] - sorted[lo])
}

fn quantile_map(sorted: &[f64]) -> BTreeMap<String, f64> {
    SUMMARY_LEVELS
        .iter()
        .map(|&l| (l.to_string(), quantile_sorted(sorted, l)))
        .collect()
}

fn sorted(mut values: Vec<f64>) -> Vec<f64> {
    values.sort_by(f64::total_cmp);
    values
}

/// Summary of simulated p-values.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SimSummary {
    pub median_p: f64,
    pub frac_below_alpha: f64,
    /// Keyed by level: "0.05", "0.25", "0.5", "0.75", "0.95".
    pub quantiles: BTreeMap<String, f64>,
    pub reps: usize,
}

impl SimSummary {
    pub fn from_p_values(values: Vec<f64>, alpha: f64) -> Self {
        let reps = values.len();
        let below = values.iter().filter(|&&p| p < alpha).count();
        let v = sorted(values);
        SimSummary {
            median_p: quantile_sorted(&v, 0.5),
            frac_below_alpha: below as f64 / reps as f64,
            quantiles: quantile_map(&v),
            reps,
        }
    }

    pub fn quantile(&self, level: f64) -> Option<f64> {
        self.quantiles.get(&level.to_string()).copied()
    }
}

/// Summary of simulated pooled risk ratios.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RrSummary {
    pub median_rr: f64,
    pub frac_rr_above_one: f64,
    /// Share of replicates whose 95% interval excludes RR = 1.
    pub frac_significant: f64,
    pub quantiles: BTreeMap<String, f64>,
    pub reps: usize,
}

impl RrSummary {
    pub fn from_pooled(rr: Vec<f64>, significant: usize) -> Self {
        let reps = rr.len();
        let above = rr.iter().filter(|&&r| r > 1.0).count();
        let v = sorted(rr);
        RrSummary {
            median_rr: quantile_sorted(&v, 0.5),
            frac_rr_above_one: above as f64 / reps as f64,
            frac_significant: significant as f64 / reps as f64,
            quantiles: quantile_map(&v),
            reps,
        }
    }
}
