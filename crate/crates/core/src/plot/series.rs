use std::fmt::Write as _;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::inference::AuditResult;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PlotSeries {
    /// `(rank, p)` with ranks 1..k and p non-decreasing.
    pub points: Vec<(usize, f64)>,
    pub alpha: f64,
    pub k: usize,
}

/// Point i of the series is `(i, p of the rank-i study)`.
pub fn build_series(a: &AuditResult) -> PlotSeries {
    let points: Vec<(usize, f64)> = a.studies.iter().map(|s| (s.rank, s.p)).collect();
    assert!(
        points.windows(2).all(|w| w[0].1 <= w[1].1),
        "audit output must be sorted by p"
    );
    assert!(points.iter().enumerate().all(|(i, &(r, _))| r == i + 1));
    PlotSeries {
        k: points.len(),
        points,
        alpha: a.alpha,
    }
}

impl PlotSeries {
    /// Builds a series from p-values that are already sorted ascending.
    pub fn from_sorted_p_values(p_values: &[f64], alpha: f64) -> Result<Self> {
        if p_values.iter().any(|&p| !(p > 0.0 && p <= 1.0)) {
            return Err(Error::OutOfDomain("p-values must lie in (0, 1]".into()));
        }
        if p_values.windows(2).any(|w| w[0] > w[1]) {
            return Err(Error::DegenerateInput(
                "p-values must be sorted ascending".into(),
            ));
        }
        Ok(PlotSeries {
            points: p_values
                .iter()
                .enumerate()
                .map(|(i, &p)| (i + 1, p))
                .collect(),
            alpha,
            k: p_values.len(),
        })
    }

    pub fn ranks(&self) -> Vec<f64> {
        self.points.iter().map(|&(r, _)| r as f64).collect()
    }

    pub fn p_values(&self) -> Vec<f64> {
        self.points.iter().map(|&(_, p)| p).collect()
    }

    /// CSV with columns `rank,p,cumulative_fraction` (rank / k).
    pub fn to_csv(&self) -> String {
        let mut out = String::from("rank,p,cumulative_fraction\n");
        for &(rank, p) in &self.points {
            let _ = writeln!(out, "{rank},{p:e},{}", rank as f64 / self.k as f64);
        }
        out
    }
}
