//! Special functions for normal tail probabilities.
//!
//! `erfc` is a port of the FreeBSD msun `s_erf.c` routine (Sun Microsystems,
//! 1993: "Permission to use, copy, modify, and distribute this software is
//! freely granted, provided that this notice is preserved."). It evaluates
//! the complementary error function directly in the upper tail, so results
//! keep full relative precision down to the subnormal range instead of
//! cancelling to zero the way `1 - erf(x)` does.
//!
//! The inverse normal CDF is Wichura's AS 241 (PPND16), accurate to about
//! one part in 10^16.

#![allow(clippy::excessive_precision, clippy::unreadable_literal)]

const ERX: f64 = 8.45062911510467529297e-01;
// erf on [0, 0.84375]
const PP0: f64 = 1.28379167095512558561e-01;
const PP1: f64 = -3.25042107247001499370e-01;
const PP2: f64 = -2.84817495755985104766e-02;
const PP3: f64 = -5.77027029648944159157e-03;
const PP4: f64 = -2.37630166566501626084e-05;
const QQ1: f64 = 3.97917223959155352819e-01;
const QQ2: f64 = 6.50222499887672944485e-02;
const QQ3: f64 = 5.08130628187576562776e-03;
const QQ4: f64 = 1.32494738004321644526e-04;
const QQ5: f64 = -3.96022827877536812320e-06;
// erf on [0.84375, 1.25]
const PA0: f64 = -2.36211856075265944077e-03;
const PA1: f64 = 4.14856118683748331666e-01;
const PA2: f64 = -3.72207876035701323847e-01;
const PA3: f64 = 3.18346619901161753674e-01;
const PA4: f64 = -1.10894694282396677476e-01;
const PA5: f64 = 3.54783043256182359371e-02;
const PA6: f64 = -2.16637559486879084300e-03;
const QA1: f64 = 1.06420880400844228286e-01;
const QA2: f64 = 5.40397917702171048937e-01;
const QA3: f64 = 7.18286544141962662868e-02;
const QA4: f64 = 1.26171219808761642112e-01;
const QA5: f64 = 1.36370839120290507362e-02;
const QA6: f64 = 1.19844998467991074170e-02;
// erfc on [1.25, 1/0.35]
const RA0: f64 = -9.86494403484714822705e-03;
const RA1: f64 = -6.93858572707181764372e-01;
const RA2: f64 = -1.05586262253232909814e+01;
const RA3: f64 = -6.23753324503260060396e+01;
const RA4: f64 = -1.62396669462573470355e+02;
const RA5: f64 = -1.84605092906711035994e+02;
const RA6: f64 = -8.12874355063065934246e+01;
const RA7: f64 = -9.81432934416914548592e+00;
const SA1: f64 = 1.96512716674392571292e+01;
const SA2: f64 = 1.37657754143519042600e+02;
const SA3: f64 = 4.34565877475229228821e+02;
const SA4: f64 = 6.45387271733267880336e+02;
const SA5: f64 = 4.29008140027567833386e+02;
const SA6: f64 = 1.08635005541779435134e+02;
const SA7: f64 = 6.57024977031928170135e+00;
const SA8: f64 = -6.04244152148580987438e-02;
// erfc on [1/0.35, 28]
const RB0: f64 = -9.86494292470009928597e-03;
const RB1: f64 = -7.99283237680523006574e-01;
const RB2: f64 = -1.77579549177547519889e+01;
const RB3: f64 = -1.60636384855821916062e+02;
const RB4: f64 = -6.37566443368389627722e+02;
const RB5: f64 = -1.02509513161107724954e+03;
const RB6: f64 = -4.83519191608651397019e+02;
const SB1: f64 = 3.03380607434824582924e+01;
const SB2: f64 = 3.25792512996573918826e+02;
const SB3: f64 = 1.53672958608443695994e+03;
const SB4: f64 = 3.19985821950859553908e+03;
const SB5: f64 = 2.55305040643316442583e+03;
const SB6: f64 = 4.74528541206955367215e+02;
const SB7: f64 = -2.24409524465858183362e+01;

#[inline]
fn high_word(x: f64) -> u32 {
    (x.to_bits() >> 32) as u32
}

/// erfc on 0.84375 <= |x| < 28, positive branch.
fn erfc_tail(ix: u32, x: f64) -> f64 {
    let x = x.abs();
    if ix < 0x3ff40000 {
        // |x| < 1.25
        let s = x - 1.0;
        let p = PA0 + s * (PA1 + s * (PA2 + s * (PA3 + s * (PA4 + s * (PA5 + s * PA6)))));
        let q = 1.0 + s * (QA1 + s * (QA2 + s * (QA3 + s * (QA4 + s * (QA5 + s * QA6)))));
        return 1.0 - ERX - p / q;
    }
    let s = 1.0 / (x * x);
    let (r, big_s) = if ix < 0x4006db6d {
        // |x| < 1/0.35
        (
            RA0 + s * (RA1 + s * (RA2 + s * (RA3 + s * (RA4 + s * (RA5 + s * (RA6 + s * RA7)))))),
            1.0 + s
                * (SA1
                    + s * (SA2
                        + s * (SA3 + s * (SA4 + s * (SA5 + s * (SA6 + s * (SA7 + s * SA8))))))),
        )
    } else {
        (
            RB0 + s * (RB1 + s * (RB2 + s * (RB3 + s * (RB4 + s * (RB5 + s * RB6))))),
            1.0 + s * (SB1 + s * (SB2 + s * (SB3 + s * (SB4 + s * (SB5 + s * (SB6 + s * SB7)))))),
        )
    };
    // Split x*x so the large exponent is computed exactly.
    let z = f64::from_bits(x.to_bits() & 0xffff_ffff_0000_0000);
    (-z * z - 0.5625).exp() * ((z - x) * (z + x) + r / big_s).exp() / x
}

/// Complementary error function, `1 - erf(x)`, evaluated without
/// cancellation for large positive `x`.
pub fn erfc(x: f64) -> f64 {
    if x.is_nan() {
        return x;
    }
    let bits = high_word(x);
    let negative = bits >> 31 != 0;
    let ix = bits & 0x7fff_ffff;
    if ix >= 0x7ff0_0000 {
        return if negative { 2.0 } else { 0.0 };
    }
    if ix < 0x3feb_0000 {
        // |x| < 0.84375
        if ix < 0x3c70_0000 {
            return 1.0 - x;
        }
        let z = x * x;
        let r = PP0 + z * (PP1 + z * (PP2 + z * (PP3 + z * PP4)));
        let s = 1.0 + z * (QQ1 + z * (QQ2 + z * (QQ3 + z * (QQ4 + z * QQ5))));
        let y = r / s;
        if negative || ix < 0x3fd0_0000 {
            return 1.0 - (x + x * y);
        }
        return 0.5 - (x - 0.5 + x * y);
    }
    if ix < 0x403c_0000 {
        // |x| < 28
        let t = erfc_tail(ix, x);
        return if negative { 2.0 - t } else { t };
    }
    if negative {
        2.0
    } else {
        0.0
    }
}

/// Coefficients of AS 241.
mod as241 {
    pub const SPLIT1: f64 = 0.425;
    pub const SPLIT2: f64 = 5.0;
    pub const CONST1: f64 = 0.180625;
    pub const CONST2: f64 = 1.6;

    pub const A: [f64; 8] = [
        3.3871328727963666080E0,
        1.3314166789178437745E+2,
        1.9715909503065514427E+3,
        1.3731693765509461125E+4,
        4.5921953931549871457E+4,
        6.7265770927008700853E+4,
        3.3430575583588128105E+4,
        2.5090809287301226727E+3,
    ];
    pub const B: [f64; 8] = [
        1.0,
        4.2313330701600911252E+1,
        6.8718700749205790830E+2,
        5.3941960214247511077E+3,
        2.1213794301586595867E+4,
        3.9307895800092710610E+4,
        2.8729085735721942674E+4,
        5.2264952788528545610E+3,
    ];
    pub const C: [f64; 8] = [
        1.42343711074968357734E0,
        4.63033784615654529590E0,
        5.76949722146069140550E0,
        3.64784832476320460504E0,
        1.27045825245236838258E0,
        2.41780725177450611770E-1,
        2.27238449892691845833E-2,
        7.74545014278341407640E-4,
    ];
    pub const D: [f64; 8] = [
        1.0,
        2.05319162663775882187E0,
        1.67638483018380384940E0,
        6.89767334985100004550E-1,
        1.48103976427480074590E-1,
        1.51986665636164571966E-2,
        5.47593808499534494600E-4,
        1.05075007164441684324E-9,
    ];
    pub const E: [f64; 8] = [
        6.65790464350110377720E0,
        5.46378491116411436990E0,
        1.78482653991729133580E0,
        2.96560571828504891230E-1,
        2.65321895265761230930E-2,
        1.24266094738807843860E-3,
        2.71155556874348757815E-5,
        2.01033439929228813265E-7,
    ];
    pub const F: [f64; 8] = [
        1.0,
        5.99832206555887937690E-1,
        1.36929880922735805310E-1,
        1.48753612908506148525E-2,
        7.86869131145613259100E-4,
        1.84631831751005468180E-5,
        1.42151175831644588870E-7,
        2.04426310338993978564E-15,
    ];
}

#[inline]
fn horner(coef: &[f64; 8], x: f64) -> f64 {
    coef.iter().rev().fold(0.0, |acc, &c| acc * x + c)
}

/// Magnitude of the normal deviate cutting off a tail of area `tail`
/// (`0 < tail <= 0.5`), i.e. `Φ⁻¹(1 - tail)` computed from the tail area
/// itself so tiny tails keep their precision.
fn deviate_from_tail(tail: f64) -> f64 {
    use as241::*;
    let r = (-tail.ln()).sqrt();
    if r <= SPLIT2 {
        let r = r - CONST2;
        horner(&C, r) / horner(&D, r)
    } else {
        let r = r - SPLIT2;
        horner(&E, r) / horner(&F, r)
    }
}

/// Inverse standard normal CDF for `0 < q < 1`.
pub fn inverse_normal_cdf(q: f64) -> f64 {
    use as241::*;
    let centered = q - 0.5;
    if centered.abs() <= SPLIT1 {
        let r = CONST1 - centered * centered;
        return centered * horner(&A, r) / horner(&B, r);
    }
    if centered < 0.0 {
        -deviate_from_tail(q)
    } else {
        deviate_from_tail(1.0 - q)
    }
}

/// `Φ⁻¹(1 - tail)` for `0 < tail < 1`, without forming `1 - tail`.
pub fn inverse_normal_upper(tail: f64) -> f64 {
    use as241::*;
    let centered = 0.5 - tail;
    if centered.abs() <= SPLIT1 {
        let r = CONST1 - centered * centered;
        return centered * horner(&A, r) / horner(&B, r);
    }
    if centered > 0.0 {
        deviate_from_tail(tail)
    } else {
        -deviate_from_tail(1.0 - tail)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn erfc_special_values() {
        assert_eq!(erfc(0.0), 1.0);
        assert_eq!(erfc(f64::INFINITY), 0.0);
        assert_eq!(erfc(f64::NEG_INFINITY), 2.0);
        assert!(erfc(f64::NAN).is_nan());
        assert_eq!(erfc(30.0), 0.0);
        assert_eq!(erfc(-30.0), 2.0);
    }

    #[test]
    fn erfc_reflection() {
        for &x in &[0.1, 0.5, 0.9, 1.3, 2.0, 3.5, 5.0] {
            let sum = erfc(x) + erfc(-x);
            assert!((sum - 2.0).abs() < 1e-15, "x = {x}: {sum}");
        }
    }

    #[test]
    fn erfc_reference_points() {
        // mpmath, 50 digits.
        let cases = [
            (0.3, 0.67137324054087257),
            (1.0, 0.15729920705028513),
            (2.0, 0.0046777349810472658),
            (4.0, 1.5417257900280019e-8),
            (10.0, 2.0884875837625448e-45),
            (26.0, 5.6631924088561428e-296),
        ];
        for (x, want) in cases {
            let got = erfc(x);
            assert!(
                ((got - want) / want).abs() < 1e-14,
                "erfc({x}) = {got}, want {want}"
            );
        }
    }

    #[test]
    fn quantile_symmetry() {
        for &q in &[1e-300, 1e-20, 0.001, 0.02425, 0.3, 0.49] {
            assert_eq!(inverse_normal_cdf(q), -inverse_normal_upper(q));
        }
        for &q in &[0.001, 0.02425, 0.3, 0.49] {
            assert!((inverse_normal_cdf(q) + inverse_normal_cdf(1.0 - q)).abs() < 1e-9);
        }
        assert_eq!(inverse_normal_cdf(0.5), 0.0);
    }

    #[test]
    fn upper_matches_lower_where_exact() {
        for &t in &[0.5, 0.25, 0.125, 0.0625, 1.0 / 1024.0] {
            assert_eq!(inverse_normal_upper(t), inverse_normal_cdf(1.0 - t));
        }
    }
}
