//! Multiple-testing selection: each base paper runs many analyses and
//! reports the smallest p-value, which then enters a meta-analysis.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::rng::{DrawStream, Purpose, MAX_DRAWS, MAX_UNITS};
use super::summary::{RrSummary, SimSummary};
use crate::error::{Error, Result};
use crate::inference::{normal_quantile_upper, DEFAULT_ALPHA};
use crate::pool::dersimonian_laird_pool;
use crate::reference::pm25_allcause_standard_errors;
use crate::study::Dataset;

/// Sign given to an effect reconstructed from a selected p-value.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SignConvention {
    /// Every reported effect points in the harmful direction.
    #[default]
    Positive,
    /// Fair coin per paper.
    Random,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct SelectionSimConfig {
    /// Analyses per base paper; the smallest p-value is reported.
    #[serde(rename = "q")]
    pub q_questions: u64,
    pub n_papers: usize,
    pub reps: usize,
    pub seed: u64,
    pub alpha: f64,
    /// Standard errors assigned (with replacement) to selected effects.
    pub se_pool: Vec<f64>,
    pub sign: SignConvention,
}

impl Default for SelectionSimConfig {
    fn default() -> Self {
        SelectionSimConfig {
            q_questions: 1,
            n_papers: 29,
            reps: 10_000,
            seed: 0,
            alpha: DEFAULT_ALPHA,
            se_pool: pm25_allcause_standard_errors(),
            sign: SignConvention::Positive,
        }
    }
}

impl SelectionSimConfig {
    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::InvalidConfig(msg));
        if self.q_questions < 1 || self.q_questions > MAX_DRAWS {
            return bad(format!(
                "q must be in [1, {MAX_DRAWS}], got {}",
                self.q_questions
            ));
        }
        if self.n_papers < 1 || self.n_papers as u64 > MAX_UNITS {
            return bad(format!(
                "n_papers must be in [1, {MAX_UNITS}], got {}",
                self.n_papers
            ));
        }
        if self.reps < 1 {
            return bad("reps must be >= 1".into());
        }
        if !(self.alpha > 0.0 && self.alpha < 1.0) {
            return bad(format!("alpha must be in (0, 1), got {}", self.alpha));
        }
        if let Some(se) = self.se_pool.iter().find(|&&s| !(s > 0.0 && s.is_finite())) {
            return bad(format!("se_pool values must be finite and > 0, got {se}"));
        }
        Ok(())
    }
}

/// Smallest of `q` null p-values for `(rep, paper)`. Raising `q` only adds
/// draws, so with a fixed seed the minimum is non-increasing in `q`.
fn min_null_p(seed: u64, rep: u64, paper: u64, q: u64) -> f64 {
    let mut stream = DrawStream::new(seed, rep, paper, Purpose::Question);
    (0..q).fold(1.0, |m, _| m.min(stream.next_open01()))
}

/// Distribution of the minimum of `q_questions` Uniform(0, 1) p-values.
/// The median tends to `1 - 0.5^(1/q)`.
pub fn min_p_selection(c: &SelectionSimConfig) -> Result<SimSummary> {
    c.validate()?;
    let ps: Vec<f64> = (0..c.reps as u64)
        .into_par_iter()
        .map(|rep| min_null_p(c.seed, rep, 0, c.q_questions))
        .collect();
    Ok(SimSummary::from_p_values(ps, c.alpha))
}

/// Meta-analysis of papers that each report their best of `q_questions`
/// null analyses.
///
/// Per replicate and paper: take the min-p, invert it to
/// `z = Φ⁻¹(1 - p/2)`, draw an SE from `se_pool`, and report `z · se` with
/// the configured sign. The `n_papers` effects are pooled by
/// DerSimonian–Laird and the pooled risk ratios summarised.
pub fn selected_effect_meta(c: &SelectionSimConfig) -> Result<RrSummary> {
    c.validate()?;
    if c.n_papers < 2 {
        return Err(Error::InsufficientStudies {
            needed: 2,
            got: c.n_papers,
        });
    }
    if c.se_pool.is_empty() {
        return Err(Error::InvalidConfig("se_pool is empty".into()));
    }
    let pooled: Vec<(f64, bool)> = (0..c.reps as u64)
        .into_par_iter()
        .map(|rep| {
            let effects: Vec<(f64, f64)> = (0..c.n_papers as u64)
                .map(|paper| {
                    let p = min_null_p(c.seed, rep, paper, c.q_questions);
                    let z = normal_quantile_upper(p / 2.0).expect("p in (0, 1]");
                    let u =
                        DrawStream::new(c.seed, rep, paper, Purpose::SeAssignment).next_open01();
                    let idx = ((u * c.se_pool.len() as f64) as usize).min(c.se_pool.len() - 1);
                    let se = c.se_pool[idx];
                    let sign = match c.sign {
                        SignConvention::Positive => 1.0,
                        SignConvention::Random => {
                            let s =
                                DrawStream::new(c.seed, rep, paper, Purpose::Sign).next_open01();
                            if s < 0.5 {
                                -1.0
                            } else {
                                1.0
                            }
                        }
                    };
                    (sign * z * se, se)
                })
                .collect();
            let d = Dataset::from_effects(&effects)?;
            let pooled = dersimonian_laird_pool(&d)?;
            Ok((pooled.rr, pooled.is_significant()))
        })
        .collect::<Result<_>>()?;
    let significant = pooled.iter().filter(|(_, s)| *s).count();
    Ok(RrSummary::from_pooled(
        pooled.into_iter().map(|(rr, _)| rr).collect(),
        significant,
    ))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg(q: u64, reps: usize) -> SelectionSimConfig {
        SelectionSimConfig {
            q_questions: q,
            reps,
            seed: 11,
            ..SelectionSimConfig::default()
        }
    }

    #[test]
    fn defaults_use_bundled_standard_errors() {
        let c = SelectionSimConfig::default();
        assert_eq!(c.se_pool.len(), 29);
        assert_eq!(c.se_pool[0], 0.001309);
        assert_eq!(c.n_papers, 29);
    }

    #[test]
    fn validation() {
        assert!(cfg(0, 10).validate().is_err());
        assert!(cfg(1, 0).validate().is_err());
        let mut c = cfg(1, 1);
        c.se_pool = vec![0.1, -0.2];
        assert!(c.validate().is_err());
        c.se_pool = vec![];
        assert!(c.validate().is_ok());
        assert!(selected_effect_meta(&c).is_err());
        let mut c = cfg(1, 1);
        c.n_papers = 1;
        assert!(matches!(
            selected_effect_meta(&c),
            Err(Error::InsufficientStudies { .. })
        ));
    }

    #[test]
    fn min_p_is_nonincreasing_in_q() {
        for rep in 0..50 {
            let a = min_null_p(5, rep, 0, 1);
            let b = min_null_p(5, rep, 0, 10);
            let c = min_null_p(5, rep, 0, 100);
            assert!(a >= b && b >= c);
        }
    }

    #[test]
    fn two_paper_meta_is_reproducible() {
        let c = SelectionSimConfig {
            n_papers: 2,
            reps: 1,
            seed: 2024,
            ..SelectionSimConfig::default()
        };
        let a = selected_effect_meta(&c).unwrap();
        let b = selected_effect_meta(&c).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.reps, 1);
        assert!(a.median_rr > 1.0);
    }

    #[test]
    fn random_signs_centre_near_null() {
        let c = SelectionSimConfig {
            sign: SignConvention::Random,
            ..cfg(1, 400)
        };
        let s = selected_effect_meta(&c).unwrap();
        assert!((s.median_rr - 1.0).abs() < 0.002, "{}", s.median_rr);
    }
}
