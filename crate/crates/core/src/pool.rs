//! Inverse-variance pooling of log effects.
//!
//! Both estimators sum over studies in a canonical order (sorted by standard
//! error, then effect), so the output is bit-identical under any
//! permutation of the input rows.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::study::Dataset;

/// `Φ⁻¹(0.975)`, the two-sided 95% multiplier.
pub const Z_975: f64 = 1.959963984540054;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum PoolMethod {
    FixedEffect,
    DersimonianLaird,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PooledEffect {
    pub method: PoolMethod,
    pub k: usize,
    pub pooled_ln: f64,
    pub se_pooled: f64,
    pub ci95_ln: (f64, f64),
    /// `exp(pooled_ln)`.
    pub rr: f64,
    pub ci95_rr: (f64, f64),
    pub cochran_q: f64,
    pub i_squared: f64,
    /// Between-study variance; 0 for the fixed-effect model.
    pub tau_squared: f64,
}

impl PooledEffect {
    fn new(
        method: PoolMethod,
        k: usize,
        pooled_ln: f64,
        se_pooled: f64,
        cochran_q: f64,
        tau_squared: f64,
    ) -> Self {
        let i_squared = if cochran_q > 0.0 {
            ((cochran_q - (k as f64 - 1.0)) / cochran_q).max(0.0)
        } else {
            0.0
        };
        let half = Z_975 * se_pooled;
        to_risk_ratio(&PooledEffect {
            method,
            k,
            pooled_ln,
            se_pooled,
            ci95_ln: (pooled_ln - half, pooled_ln + half),
            rr: f64::NAN,
            ci95_rr: (f64::NAN, f64::NAN),
            cochran_q,
            i_squared,
            tau_squared,
        })
    }

    /// Builds a fixed-effect record from a log effect and its SE alone.
    pub fn from_ln(pooled_ln: f64, se_pooled: f64) -> Self {
        Self::new(PoolMethod::FixedEffect, 1, pooled_ln, se_pooled, 0.0, 0.0)
    }

    /// True when the 95% interval on the ratio scale excludes 1.
    pub fn is_significant(&self) -> bool {
        self.ci95_rr.0 > 1.0 || self.ci95_rr.1 < 1.0
    }
}

/// Fills `rr` and `ci95_rr` from the log-scale fields. Idempotent.
pub fn to_risk_ratio(p: &PooledEffect) -> PooledEffect {
    PooledEffect {
        rr: p.pooled_ln.exp(),
        ci95_rr: (p.ci95_ln.0.exp(), p.ci95_ln.1.exp()),
        ..p.clone()
    }
}

fn canonical_pairs(d: &Dataset) -> Result<Vec<(f64, f64)>> {
    if d.is_empty() {
        return Err(Error::EmptyDataset);
    }
    let mut pairs: Vec<(f64, f64)> = d
        .records
        .iter()
        .map(|r| (r.ln_effect, r.se_ln_effect))
        .collect();
    if let Some(r) = d.records.iter().find(|r| !(r.se_ln_effect > 0.0)) {
        return Err(Error::NonPositiveSe {
            row: r.row_id,
            se: r.se_ln_effect,
        });
    }
    pairs.sort_by(|a, b| a.1.total_cmp(&b.1).then(a.0.total_cmp(&b.0)));
    Ok(pairs)
}

struct FixedStage {
    pooled_ln: f64,
    sum_w: f64,
    sum_w2: f64,
    q: f64,
}

fn fixed_stage(pairs: &[(f64, f64)]) -> FixedStage {
    let (mut sum_w, mut sum_wx, mut sum_w2) = (0.0, 0.0, 0.0);
    for &(x, se) in pairs {
        let w = 1.0 / (se * se);
        sum_w += w;
        sum_wx += w * x;
        sum_w2 += w * w;
    }
    let pooled_ln = sum_wx / sum_w;
    let q = pairs
        .iter()
        .map(|&(x, se)| (x - pooled_ln).powi(2) / (se * se))
        .sum();
    FixedStage {
        pooled_ln,
        sum_w,
        sum_w2,
        q,
    }
}

/// Inverse-variance fixed-effect pooling with weights `1/se²`.
pub fn fixed_effect_pool(d: &Dataset) -> Result<PooledEffect> {
    let pairs = canonical_pairs(d)?;
    let fe = fixed_stage(&pairs);
    Ok(PooledEffect::new(
        PoolMethod::FixedEffect,
        pairs.len(),
        fe.pooled_ln,
        1.0 / fe.sum_w.sqrt(),
        fe.q,
        0.0,
    ))
}

/// DerSimonian–Laird random-effects pooling.
///
/// `tau² = max(0, (Q - (k-1)) / (Σw - Σw²/Σw))` with fixed-effect weights,
/// then studies are re-weighted by `1/(se² + tau²)`. `Q` and `I²` are the
/// fixed-effect heterogeneity statistics.
pub fn dersimonian_laird_pool(d: &Dataset) -> Result<PooledEffect> {
    let pairs = canonical_pairs(d)?;
    let k = pairs.len();
    if k < 2 {
        return Err(Error::InsufficientStudies { needed: 2, got: k });
    }
    let fe = fixed_stage(&pairs);
    let scale = fe.sum_w - fe.sum_w2 / fe.sum_w;
    let tau_squared = if scale > 0.0 {
        ((fe.q - (k as f64 - 1.0)) / scale).max(0.0)
    } else {
        0.0
    };
    if tau_squared == 0.0 {
        return Ok(PooledEffect::new(
            PoolMethod::DersimonianLaird,
            k,
            fe.pooled_ln,
            1.0 / fe.sum_w.sqrt(),
            fe.q,
            0.0,
        ));
    }
    let (mut sum_w, mut sum_wx) = (0.0, 0.0);
    for &(x, se) in &pairs {
        let w = 1.0 / (se * se + tau_squared);
        sum_w += w;
        sum_wx += w * x;
    }
    Ok(PooledEffect::new(
        PoolMethod::DersimonianLaird,
        k,
        sum_wx / sum_w,
        1.0 / sum_w.sqrt(),
        fe.q,
        tau_squared,
    ))
}
