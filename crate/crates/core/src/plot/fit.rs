use serde::Serialize;

use super::PlotSeries;
use crate::error::{Error, Result};

/// Ordinary least squares fit of p on rank.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LineFit {
    pub slope: f64,
    pub intercept: f64,
    pub sse: f64,
    pub r_squared: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TwoSegmentFit {
    /// Last rank of the left segment, in `[2, k-2]`.
    pub breakpoint: usize,
    pub left: LineFit,
    pub right: LineFit,
    pub total_sse: f64,
}

pub(crate) fn ols(xs: &[f64], ys: &[f64]) -> LineFit {
    debug_assert_eq!(xs.len(), ys.len());
    debug_assert!(xs.len() >= 2);
    let n = xs.len() as f64;
    let x_mean = xs.iter().sum::<f64>() / n;
    let y_mean = ys.iter().sum::<f64>() / n;
    let (mut sxx, mut sxy, mut syy) = (0.0, 0.0, 0.0);
    for (&x, &y) in xs.iter().zip(ys) {
        let (dx, dy) = (x - x_mean, y - y_mean);
        sxx += dx * dx;
        sxy += dx * dy;
        syy += dy * dy;
    }
    let slope = sxy / sxx;
    let intercept = y_mean - slope * x_mean;
    let sse: f64 = xs
        .iter()
        .zip(ys)
        .map(|(&x, &y)| {
            let r = y - (intercept + slope * x);
            r * r
        })
        .sum();
    let r_squared = if syy > 0.0 { 1.0 - sse / syy } else { 1.0 };
    LineFit {
        slope,
        intercept,
        sse,
        r_squared,
    }
}

pub fn fit_single_line(s: &PlotSeries) -> Result<LineFit> {
    if s.k < 2 {
        return Err(Error::DegenerateInput(format!(
            "a line fit needs at least 2 points, got {}",
            s.k
        )));
    }
    Ok(ols(&s.ranks(), &s.p_values()))
}

/// Exhaustive search over breakpoints `b ∈ [2, k-2]`, fitting ranks `<= b`
/// and `> b` separately. Ties go to the smaller breakpoint.
pub fn fit_two_segment(s: &PlotSeries) -> Result<TwoSegmentFit> {
    if s.k < 5 {
        return Err(Error::DegenerateInput(format!(
            "a two-segment fit needs at least 5 points, got {}",
            s.k
        )));
    }
    let xs = s.ranks();
    let ys = s.p_values();
    let mut best: Option<TwoSegmentFit> = None;
    for b in 2..=s.k - 2 {
        let left = ols(&xs[..b], &ys[..b]);
        let right = ols(&xs[b..], &ys[b..]);
        let total_sse = left.sse + right.sse;
        if best.is_none_or(|f| total_sse < f.total_sse) {
            best = Some(TwoSegmentFit {
                breakpoint: b,
                left,
                right,
                total_sse,
            });
        }
    }
    Ok(best.expect("k >= 5 gives at least one breakpoint"))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn series(ps: &[f64]) -> PlotSeries {
        PlotSeries::from_sorted_p_values(ps, 0.05).unwrap()
    }

    #[test]
    fn exact_line() {
        let f = fit_single_line(&series(&[0.1, 0.2, 0.3])).unwrap();
        assert!((f.slope - 0.1).abs() < 1e-15);
        assert!(f.intercept.abs() < 1e-15);
        assert!(f.sse < 1e-30);
        assert!((f.r_squared - 1.0).abs() < 1e-12);
    }

    #[test]
    fn constant_series() {
        let f = fit_single_line(&series(&[0.5; 6])).unwrap();
        assert_eq!(f.slope, 0.0);
        assert_eq!(f.intercept, 0.5);
        assert_eq!(f.sse, 0.0);
    }

    #[test]
    fn too_few_points() {
        assert!(matches!(
            fit_single_line(&series(&[0.5])),
            Err(Error::DegenerateInput(_))
        ));
        assert!(matches!(
            fit_two_segment(&series(&[0.1, 0.2, 0.3, 0.4])),
            Err(Error::DegenerateInput(_))
        ));
    }

    #[test]
    fn recovers_constructed_bilinear() {
        // Flat arm at 0.001 for ranks 1..=10, then slope 0.06 from rank 11.
        let ps: Vec<f64> = (1..=20)
            .map(|r| {
                if r <= 10 {
                    0.001
                } else {
                    0.06 * (r - 10) as f64
                }
            })
            .collect();
        let f = fit_two_segment(&series(&ps)).unwrap();
        assert_eq!(f.breakpoint, 10);
        assert!(f.total_sse < 1e-25);
        assert!(f.left.slope.abs() < 1e-12);
        assert!((f.right.slope - 0.06).abs() < 1e-12);
    }

    #[test]
    fn exact_line_splits_cleanly() {
        let ps: Vec<f64> = (1..=29).map(|i| i as f64 / 30.0).collect();
        let s = series(&ps);
        let one = fit_single_line(&s).unwrap();
        let two = fit_two_segment(&s).unwrap();
        assert!(two.total_sse < 1e-25);
        assert!((two.left.slope - one.slope).abs() < 1e-12);
        assert!((two.right.slope - one.slope).abs() < 1e-12);
        assert!((one.slope - 1.0 / 30.0).abs() < 1e-15);
        assert!(one.intercept.abs() < 1e-14);
    }

    #[test]
    fn segments_partition_sse() {
        let ps = [0.001, 0.002, 0.01, 0.2, 0.4, 0.5, 0.8, 0.9];
        let f = fit_two_segment(&series(&ps)).unwrap();
        assert_eq!(f.total_sse, f.left.sse + f.right.sse);
        assert!((2..=6).contains(&f.breakpoint));
    }
}
