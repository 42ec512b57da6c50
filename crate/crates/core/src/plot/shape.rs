use serde::Serialize;

use super::fit::{fit_single_line, fit_two_segment, LineFit, TwoSegmentFit};
use super::ks::ks_uniform;
use super::series::build_series;
use crate::error::{Error, Result};
use crate::inference::AuditResult;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Shape {
    /// Consistent with the null: p-values on one straight line.
    UniformLine,
    /// A flat arm of significant p-values followed by a rising arm.
    Bilinear,
    /// Nearly every p-value is below alpha.
    MostlySignificant,
    Indeterminate,
}

impl Shape {
    pub fn as_str(self) -> &'static str {
        match self {
            Shape::UniformLine => "uniform_line",
            Shape::Bilinear => "bilinear",
            Shape::MostlySignificant => "mostly_significant",
            Shape::Indeterminate => "indeterminate",
        }
    }
}

/// Thresholds for [`classify_shape_with`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ShapeConfig {
    /// `frac_below_alpha` at or above this is `MostlySignificant`.
    pub mostly_significant_frac: f64,
    /// KS p-value above this is compatible with a uniform line.
    pub ks_p_threshold: f64,
}

impl Default for ShapeConfig {
    fn default() -> Self {
        ShapeConfig {
            mostly_significant_frac: 0.9,
            ks_p_threshold: 0.05,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ShapeReport {
    pub classification: Shape,
    pub single: LineFit,
    pub two_segment: TwoSegmentFit,
    pub ks_statistic: f64,
    pub ks_p: f64,
    pub frac_below_alpha: f64,
    pub bic_single: f64,
    pub bic_two_segment: f64,
}

impl ShapeReport {
    /// True when the two-segment model wins on BIC.
    pub fn two_segment_preferred(&self) -> bool {
        self.bic_two_segment < self.bic_single
    }
}

/// `k ln(sse/k) + params ln k`. SSE is floored relative to the total sum
/// of squares so exactly collinear data does not produce `ln 0`.
fn bic(sse: f64, sst: f64, k: usize, params: f64) -> f64 {
    let kf = k as f64;
    let floored = sse.max(1e-12 * sst + f64::MIN_POSITIVE);
    kf * (floored / kf).ln() + params * kf.ln()
}

pub fn classify_shape(a: &AuditResult) -> Result<ShapeReport> {
    classify_shape_with(a, &ShapeConfig::default())
}

/// Rules, first match wins:
/// 1. `MostlySignificant` if `frac_below_alpha >= mostly_significant_frac`;
/// 2. `UniformLine` if KS p exceeds its threshold and the two-segment model
///    does not beat the single line on BIC;
/// 3. `Bilinear` if the two-segment model wins on BIC, the left segment's
///    mean p is below alpha and the right segment's is not;
/// 4. `Indeterminate`.
pub fn classify_shape_with(a: &AuditResult, cfg: &ShapeConfig) -> Result<ShapeReport> {
    let k = a.k();
    if k < 5 {
        return Err(Error::DegenerateInput(format!(
            "shape classification needs at least 5 studies, got {k}"
        )));
    }
    let series = build_series(a);
    let single = fit_single_line(&series)?;
    let two_segment = fit_two_segment(&series)?;
    let ps = series.p_values();
    let (ks_statistic, ks_p) = ks_uniform(&ps)?;
    let frac_below_alpha = a.frac_below_alpha();

    let mean = |xs: &[f64]| xs.iter().sum::<f64>() / xs.len() as f64;
    let p_mean = mean(&ps);
    let sst: f64 = ps.iter().map(|p| (p - p_mean).powi(2)).sum();
    let bic_single = bic(single.sse, sst, k, 2.0);
    let bic_two_segment = bic(two_segment.total_sse, sst, k, 4.0);
    let two_wins = bic_two_segment < bic_single;

    let (left, right) = ps.split_at(two_segment.breakpoint);
    let classification = if frac_below_alpha >= cfg.mostly_significant_frac {
        Shape::MostlySignificant
    } else if ks_p > cfg.ks_p_threshold && !two_wins {
        Shape::UniformLine
    } else if two_wins && mean(left) < a.alpha && mean(right) >= a.alpha {
        Shape::Bilinear
    } else {
        Shape::Indeterminate
    };

    Ok(ShapeReport {
        classification,
        single,
        two_segment,
        ks_statistic,
        ks_p,
        frac_below_alpha,
        bic_single,
        bic_two_segment,
    })
}
