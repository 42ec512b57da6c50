use proptest::prelude::*;
use pvaudit_core::reference::pm25_allcause;
use pvaudit_core::sim::rng::{DrawStream, Purpose};
use pvaudit_core::{
    audit, build_series, classify_shape, fit_single_line, fit_two_segment, ks_uniform,
    normal_quantile_upper, render_svg, AuditResult, Dataset, PlotSeries, Shape, SvgOptions,
};

fn close(got: f64, want: f64, tol: f64) -> bool {
    (got - want).abs() <= tol * want.abs().max(1.0)
}

/// Audit of synthetic studies whose two-sided p-values are `ps`.
fn audit_of(ps: &[f64]) -> AuditResult {
    let pairs: Vec<(f64, f64)> = ps
        .iter()
        .map(|&p| (normal_quantile_upper(p / 2.0).unwrap(), 1.0))
        .collect();
    audit(&Dataset::from_effects(&pairs).unwrap(), 0.05).unwrap()
}

#[test]
fn reference_fits_match_oracle() {
    let s = build_series(&audit(&pm25_allcause(), 0.05).unwrap());
    let one = fit_single_line(&s).unwrap();
    assert!(
        close(one.slope, 0.032974307855756691, 1e-9),
        "{}",
        one.slope
    );
    assert!(close(one.intercept, -0.23735774562385072, 1e-9));
    assert!(close(one.sse, 0.38949314543724882, 1e-9));
    assert!(close(one.r_squared, 0.8500058505878865, 1e-9));

    let two = fit_two_segment(&s).unwrap();
    assert_eq!(two.breakpoint, 16);
    assert!(close(two.total_sse, 0.025441239202154865, 1e-9));
    assert!(close(two.left.slope, 0.0052205172094505829, 1e-9));
    assert!(close(two.right.slope, 0.054131738092170505, 1e-9));
}

#[test]
fn reference_ks_matches_oracle() {
    let a = audit(&pm25_allcause(), 0.05).unwrap();
    let (d, p) = ks_uniform(&a.p_values()).unwrap();
    assert!(close(d, 0.46689748441991029, 1e-12), "{d}");
    assert!(
        ((p - 6.45624967134632e-6) / 6.45624967134632e-6).abs() < 1e-6,
        "{p:e}"
    );
}

#[test]
fn reference_plot_is_bilinear() {
    let r = classify_shape(&audit(&pm25_allcause(), 0.05).unwrap()).unwrap();
    assert_eq!(r.classification, Shape::Bilinear);
    assert!(r.two_segment_preferred());
    assert!(r.ks_p < 0.001);
}

#[test]
fn evenly_spaced_p_values_are_a_uniform_line() {
    let ps: Vec<f64> = (1..=29).map(|i| i as f64 / 30.0).collect();
    let r = classify_shape(&audit_of(&ps)).unwrap();
    assert_eq!(r.classification, Shape::UniformLine);
    assert!(r.single.r_squared > 1.0 - 1e-9);
}

#[test]
fn all_small_p_values_are_mostly_significant() {
    let ps: Vec<f64> = (1..=29).map(|i| 0.001 * i as f64).collect();
    let r = classify_shape(&audit_of(&ps)).unwrap();
    assert_eq!(r.classification, Shape::MostlySignificant);
}

#[test]
fn constructed_bilinear_breakpoint_recovered() {
    let ps: Vec<f64> = (1..=29)
        .map(|r| {
            if r <= 10 {
                0.001
            } else {
                0.05 * (r - 10) as f64
            }
        })
        .map(|p: f64| p.min(1.0))
        .collect();
    let a = audit_of(&ps);
    let s = build_series(&a);
    assert_eq!(fit_two_segment(&s).unwrap().breakpoint, 10);
    assert_eq!(classify_shape(&a).unwrap().classification, Shape::Bilinear);
}

#[test]
fn null_sets_rarely_look_bilinear() {
    let sets = 1000;
    let mut counts = [0usize; 4];
    for rep in 0..sets {
        let mut stream = DrawStream::new(2024, rep, 0, Purpose::Study);
        let ps: Vec<f64> = (0..29).map(|_| stream.next_open01()).collect();
        let shape = classify_shape(&audit_of(&ps)).unwrap().classification;
        counts[shape as usize] += 1;
    }
    let bilinear = counts[Shape::Bilinear as usize] as f64 / sets as f64;
    assert!(
        bilinear < 0.10,
        "bilinear fraction {bilinear}, counts {counts:?}"
    );
}

#[test]
fn reference_svg_structure() {
    let a = audit(&pm25_allcause(), 0.05).unwrap();
    let s = build_series(&a);
    let r = classify_shape(&a).unwrap();
    let svg = render_svg(&s, Some(&r), &SvgOptions::default());
    assert!(svg.starts_with("<?xml"));
    assert!(svg.trim_end().ends_with("</svg>"));
    assert_eq!(svg.matches(r#"class="point""#).count(), 29);
    assert!(svg.contains(r#"class="alpha-line" data-alpha="0.05""#));

    // SVG y grows downward, so non-decreasing p means non-increasing cy.
    let cy: Vec<f64> = svg
        .match_indices(" cy=\"")
        .map(|(i, m)| {
            let rest = &svg[i + m.len()..];
            rest[..rest.find('"').unwrap()].parse().unwrap()
        })
        .collect();
    assert_eq!(cy.len(), 29);
    assert!(cy.windows(2).all(|w| w[1] <= w[0]));
    assert_eq!(svg, render_svg(&s, Some(&r), &SvgOptions::default()));
}

fn sorted_ps(max: usize) -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(1e-12f64..1.0, 5..max).prop_map(|mut v| {
        v.sort_by(f64::total_cmp);
        v
    })
}

proptest! {
    #[test]
    fn two_segments_never_worse(ps in sorted_ps(60)) {
        let s = PlotSeries::from_sorted_p_values(&ps, 0.05).unwrap();
        let one = fit_single_line(&s).unwrap();
        let two = fit_two_segment(&s).unwrap();
        prop_assert!(two.total_sse <= one.sse + 1e-12 * (1.0 + one.sse));
        prop_assert!(two.breakpoint >= 2 && two.breakpoint <= ps.len() - 2);
    }

    #[test]
    fn exact_two_line_data_recovers_breakpoint(
        k in 8usize..40,
        frac in 0.2f64..0.8,
        a in 0.001f64..0.01,
        s1 in 0.0f64..0.01,
        s2 in 0.02f64..0.05,
        jump in 0.001f64..0.05,
    ) {
        // The jump keeps rank b off the right-hand line, so b is unique.
        let b = ((k as f64 * frac) as usize).clamp(3, k - 3);
        let at_b = a + s1 * b as f64 + jump;
        let ps: Vec<f64> = (1..=k)
            .map(|r| if r <= b { a + s1 * r as f64 } else { at_b + s2 * (r - b) as f64 })
            .collect();
        prop_assume!(ps.windows(2).all(|w| w[0] <= w[1]) && ps[k - 1] <= 1.0);
        let s = PlotSeries::from_sorted_p_values(&ps, 0.05).unwrap();
        let two = fit_two_segment(&s).unwrap();
        prop_assert_eq!(two.breakpoint, b);
        prop_assert!(two.total_sse < 1e-20);
    }

    #[test]
    fn ks_is_permutation_invariant(mut ps in prop::collection::vec(1e-9f64..1.0, 1..50)) {
        let before = ks_uniform(&ps).unwrap();
        ps.reverse();
        let third = ps.len() / 3;
        ps.rotate_left(third);
        prop_assert_eq!(before, ks_uniform(&ps).unwrap());
    }
}
