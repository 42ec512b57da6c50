use crate::error::{Error, Result};

/// Survival function of the Kolmogorov distribution, `P(K > lambda)`.
pub fn kolmogorov_sf(lambda: f64) -> f64 {
    if !(lambda > 0.0) {
        return 1.0;
    }
    let sf = if lambda < 1.18 {
        // Theta-function form; the alternating series converges slowly here.
        let c = -std::f64::consts::PI.powi(2) / (8.0 * lambda * lambda);
        let mut cdf = 0.0;
        for j in 1..=64u32 {
            let odd = f64::from(2 * j - 1);
            let term = (c * odd * odd).exp();
            cdf += term;
            if term < 1e-17 * cdf {
                break;
            }
        }
        1.0 - (2.0 * std::f64::consts::PI).sqrt() / lambda * cdf
    } else {
        let mut sum = 0.0;
        for j in 1..=100u32 {
            let jf = f64::from(j);
            let term = (-2.0 * jf * jf * lambda * lambda).exp();
            sum += if j % 2 == 1 { term } else { -term };
            if term <= 1e-17 * sum.abs() {
                break;
            }
        }
        2.0 * sum
    };
    sf.clamp(f64::MIN_POSITIVE, 1.0)
}

/// One-sample Kolmogorov–Smirnov test against Uniform(0, 1).
///
/// Returns `(D, p)` with `D = sup |F_n(x) - x|` and `p` from the asymptotic
/// Kolmogorov distribution at `sqrt(n) * D`.
pub fn ks_uniform(p_values: &[f64]) -> Result<(f64, f64)> {
    if p_values.is_empty() {
        return Err(Error::OutOfDomain(
            "KS test needs at least one value".into(),
        ));
    }
    if let Some(bad) = p_values.iter().find(|&&p| !(p > 0.0 && p <= 1.0)) {
        return Err(Error::OutOfDomain(format!(
            "KS uniformity test needs values in (0, 1], got {bad}"
        )));
    }
    let mut sorted = p_values.to_vec();
    sorted.sort_by(f64::total_cmp);
    let n = sorted.len() as f64;
    let d = sorted
        .iter()
        .enumerate()
        .map(|(i, &x)| {
            let above = (i + 1) as f64 / n - x;
            let below = x - i as f64 / n;
            above.max(below)
        })
        .fold(0.0_f64, f64::max);
    Ok((d, kolmogorov_sf(n.sqrt() * d)))
}
