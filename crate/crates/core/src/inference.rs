//! Z-scores, two-sided p-values and ranking.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::special;
use crate::study::{Dataset, StudyRecord};

/// Significance line used throughout unless overridden.
pub const DEFAULT_ALPHA: f64 = 0.05;

/// Smallest positive f64. Two-sided p-values beyond |z| ≈ 38.4 underflow
/// and are reported as this value so `p > 0` always holds.
const P_FLOOR: f64 = 5e-324;

pub fn z_score(ln_effect: f64, se: f64) -> Result<f64> {
    if !(se > 0.0) {
        return Err(Error::NonPositiveSe { row: 0, se });
    }
    if !ln_effect.is_finite() || !se.is_finite() {
        return Err(Error::OutOfDomain(format!(
            "z-score needs finite inputs, got ({ln_effect}, {se})"
        )));
    }
    Ok(ln_effect / se)
}

/// `P(|Z| >= |z|)` for standard normal `Z`, computed as `erfc(|z|/√2)`.
///
/// Never forms `1 - Φ(|z|)`, so p-values far below machine epsilon
/// (1e-19 at z ≈ 9, 1e-89 at z = 20) keep their relative precision.
pub fn two_sided_p(z: f64) -> f64 {
    special::erfc(z.abs() * std::f64::consts::FRAC_1_SQRT_2).max(P_FLOOR)
}

/// Standard normal quantile `Φ⁻¹(q)` for `0 < q < 1`.
pub fn normal_quantile(q: f64) -> Result<f64> {
    if !(q > 0.0 && q < 1.0) {
        return Err(Error::OutOfDomain(format!(
            "normal quantile needs 0 < q < 1, got {q}"
        )));
    }
    Ok(special::inverse_normal_cdf(q))
}

/// `Φ⁻¹(1 - tail)` computed from the upper-tail area directly.
///
/// Use this instead of `normal_quantile(1.0 - tail)` when `tail` is tiny:
/// `1.0 - 5e-16` is already off by ~10% in the tail once rounded. The
/// inverse of [`two_sided_p`] is `normal_quantile_upper(p / 2)`.
pub fn normal_quantile_upper(tail: f64) -> Result<f64> {
    if !(tail > 0.0 && tail < 1.0) {
        return Err(Error::OutOfDomain(format!(
            "upper-tail area must be in (0, 1), got {tail}"
        )));
    }
    Ok(special::inverse_normal_upper(tail))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AuditedStudy {
    #[serde(flatten)]
    pub base: StudyRecord,
    pub z: f64,
    pub p: f64,
    /// 1 = smallest p-value.
    pub rank: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AuditResult {
    /// Sorted by rank.
    pub studies: Vec<AuditedStudy>,
    pub alpha: f64,
    pub n_below_alpha: usize,
    pub n_at_or_above_alpha: usize,
}

impl AuditResult {
    pub fn k(&self) -> usize {
        self.studies.len()
    }

    /// p-values in rank order.
    pub fn p_values(&self) -> Vec<f64> {
        self.studies.iter().map(|s| s.p).collect()
    }

    pub fn frac_below_alpha(&self) -> f64 {
        self.n_below_alpha as f64 / self.k() as f64
    }

    /// Studies back in input (row) order.
    pub fn in_row_order(&self) -> Vec<&AuditedStudy> {
        let mut v: Vec<_> = self.studies.iter().collect();
        v.sort_by_key(|s| s.base.row_id);
        v
    }
}

/// Scores every study, ranks by ascending p (ties keep input order) and
/// counts significance at `alpha`.
pub fn audit(d: &Dataset, alpha: f64) -> Result<AuditResult> {
    if d.is_empty() {
        return Err(Error::EmptyDataset);
    }
    if !(alpha > 0.0 && alpha < 1.0) {
        return Err(Error::OutOfDomain(format!(
            "alpha must be in (0, 1), got {alpha}"
        )));
    }

    let mut scored = Vec::with_capacity(d.len());
    for r in &d.records {
        let z = z_score(r.ln_effect, r.se_ln_effect).map_err(|e| match e {
            Error::NonPositiveSe { se, .. } => Error::NonPositiveSe { row: r.row_id, se },
            other => other,
        })?;
        scored.push(AuditedStudy {
            base: r.clone(),
            z,
            p: two_sided_p(z),
            rank: 0,
        });
    }
    // Stable sort: equal p-values stay in input order.
    scored.sort_by(|a, b| a.p.total_cmp(&b.p));
    for (i, s) in scored.iter_mut().enumerate() {
        s.rank = i + 1;
    }

    let n_below_alpha = scored.iter().filter(|s| s.p < alpha).count();
    Ok(AuditResult {
        n_at_or_above_alpha: scored.len() - n_below_alpha,
        n_below_alpha,
        alpha,
        studies: scored,
    })
}
