//! Univariate normal, Student-t and chi building blocks.
//!
//! Everything here works on `f64` and keeps both tails accurate, because the
//! max-T p-values downstream are routinely as small as 1e-10.

#![allow(clippy::excessive_precision)]

use libm::erfc;
use statrs::function::beta::beta_reg;
use statrs::function::gamma::{gamma_lr, gamma_ur, ln_gamma};

use crate::error::{Error, Result};

const SQRT_2: f64 = std::f64::consts::SQRT_2;
const LN_SQRT_2PI: f64 = 0.918_938_533_204_672_8;

/// Degrees of freedom above which the t distribution is treated as normal.
pub const DF_NORMAL_LIMIT: f64 = 1e12;

pub(crate) fn is_normal_df(df: f64) -> bool {
    df.is_infinite() || df > DF_NORMAL_LIMIT
}

/// Standard normal distribution function.
pub fn norm_cdf(x: f64) -> f64 {
    if x == f64::INFINITY {
        return 1.0;
    }
    if x == f64::NEG_INFINITY {
        return 0.0;
    }
    0.5 * erfc(-x / SQRT_2)
}

/// Upper tail `1 - norm_cdf(x)` without cancellation.
pub fn norm_sf(x: f64) -> f64 {
    norm_cdf(-x)
}

pub fn norm_pdf(x: f64) -> f64 {
    (-0.5 * x * x - LN_SQRT_2PI).exp()
}

/// Inverse of the standard normal distribution function (Wichura's AS 241,
/// followed by one Halley step against `erfc`).
pub fn norm_quantile(p: f64) -> f64 {
    let x = norm_quantile_fast(p);
    if !x.is_finite() {
        return x;
    }
    // Halley refinement on whichever tail is smaller.
    let (target, cur) = if x < 0.0 {
        (p, norm_cdf(x))
    } else {
        (1.0 - p, -norm_sf(x))
    };
    let err = if x < 0.0 { cur - target } else { cur + target };
    let pdf = norm_pdf(x);
    if pdf > 0.0 && err.is_finite() {
        let u = err / pdf;
        x - u / (1.0 + 0.5 * x * u)
    } else {
        x
    }
}

/// AS 241 alone (about 1e-16 relative accuracy); used in integrand loops.
pub(crate) fn norm_quantile_fast(p: f64) -> f64 {
    if p <= 0.0 {
        return f64::NEG_INFINITY;
    }
    if p >= 1.0 {
        return f64::INFINITY;
    }
    let q = p - 0.5;
    if q.abs() <= 0.425 {
        let r = 0.180625 - q * q;
        q * poly(
            &[
                3.387_132_872_796_366_5,
                133.141_667_891_784_38,
                1_971.590_950_306_551_3,
                13_731.693_765_509_461,
                45_921.953_931_549_87,
                67_265.770_927_008_7,
                33_430.575_583_588_13,
                2_509.080_928_730_122_7,
            ],
            r,
        ) / poly(
            &[
                1.0,
                42.313_330_701_600_91,
                687.187_007_492_057_9,
                5_394.196_021_424_751,
                21_213.794_301_586_597,
                39_307.895_800_092_71,
                28_729.085_735_721_943,
                5_226.495_278_852_546,
            ],
            r,
        )
    } else {
        let tail = if q < 0.0 { p } else { 1.0 - p };
        let mut r = (-tail.ln()).sqrt();
        let v = if r <= 5.0 {
            r -= 1.6;
            poly(
                &[
                    1.423_437_110_749_683_5,
                    4.630_337_846_156_545,
                    5.769_497_221_460_691,
                    3.647_848_324_763_204_5,
                    1.270_458_252_452_368_4,
                    0.241_780_725_177_450_6,
                    0.022_723_844_989_269_184,
                    7.745_450_142_783_414e-4,
                ],
                r,
            ) / poly(
                &[
                    1.0,
                    2.053_191_626_637_758_8,
                    1.676_384_830_183_803_8,
                    0.689_767_334_985_1,
                    0.148_103_976_427_480_08,
                    0.015_198_666_563_616_457,
                    5.475_938_084_995_345e-4,
                    1.050_750_071_644_416_8e-9,
                ],
                r,
            )
        } else {
            r -= 5.0;
            poly(
                &[
                    6.657_904_643_501_103,
                    5.463_784_911_164_114,
                    1.784_826_539_917_291_3,
                    0.296_560_571_828_504_9,
                    0.026_532_189_526_576_124,
                    0.001_242_660_947_388_078_4,
                    2.711_555_568_743_487_6e-5,
                    2.010_334_399_292_288_1e-7,
                ],
                r,
            ) / poly(
                &[
                    1.0,
                    0.599_832_206_555_887_9,
                    0.136_929_880_922_735_8,
                    0.014_875_361_290_850_615,
                    7.868_691_311_456_133e-4,
                    1.846_318_317_510_054_8e-5,
                    1.421_511_758_316_446e-7,
                    2.044_263_103_389_939_7e-15,
                ],
                r,
            )
        };
        if q < 0.0 {
            -v
        } else {
            v
        }
    }
}

fn poly(coefs: &[f64], x: f64) -> f64 {
    coefs.iter().rev().fold(0.0, |acc, &c| acc * x + c)
}

/// Lower tail `P(T <= -|x|)` of the central t distribution.
fn t_lower_tail(x: f64, df: f64) -> f64 {
    let ax = x.abs();
    if ax == f64::INFINITY {
        return 0.0;
    }
    if is_normal_df(df) {
        return norm_sf(ax);
    }
    let x2 = ax * ax;
    if x2 > df {
        0.5 * beta_reg(0.5 * df, 0.5, df / (df + x2))
    } else {
        // Central region: use the complementary parametrisation so the
        // incomplete beta argument stays small.
        0.5 - 0.5 * beta_reg(0.5, 0.5 * df, x2 / (df + x2))
    }
}

/// Student-t distribution function. `df = f64::INFINITY` gives the normal.
pub fn t_cdf(x: f64, df: f64) -> f64 {
    if x.is_nan() {
        return f64::NAN;
    }
    if x <= 0.0 {
        t_lower_tail(x, df)
    } else {
        1.0 - t_lower_tail(x, df)
    }
}

/// Upper tail `1 - t_cdf(x, df)` without cancellation.
pub fn t_sf(x: f64, df: f64) -> f64 {
    t_cdf(-x, df)
}

pub fn t_pdf(x: f64, df: f64) -> f64 {
    if is_normal_df(df) {
        return norm_pdf(x);
    }
    let ln = ln_gamma(0.5 * (df + 1.0))
        - ln_gamma(0.5 * df)
        - 0.5 * (df * std::f64::consts::PI).ln()
        - 0.5 * (df + 1.0) * (x * x / df).ln_1p();
    ln.exp()
}

/// Inverse of [`t_cdf`].
pub fn t_quantile(p: f64, df: f64) -> Result<f64> {
    if !(p > 0.0 && p < 1.0) {
        return Err(Error::invalid("p", format!("must lie in (0, 1), got {p}")));
    }
    check_df(df)?;
    if p == 0.5 {
        return Ok(0.0);
    }
    if is_normal_df(df) {
        return Ok(norm_quantile(p));
    }
    let tail = p.min(1.0 - p);
    let x = lower_tail_quantile(tail, df);
    Ok(if p < 0.5 { x } else { -x })
}

/// Solves `t_lower_tail(x) = tail` for `x < 0` with a safeguarded Newton
/// iteration on the log scale.
fn lower_tail_quantile(tail: f64, df: f64) -> f64 {
    let ln_target = tail.ln();
    let f = |x: f64| t_lower_tail(x, df).ln() - ln_target;

    // Bracket [lo, hi] with f(lo) < 0 < f(hi).
    let mut hi = 0.0_f64;
    let mut lo = norm_quantile(tail).min(-1e-3);
    while f(lo) > 0.0 {
        hi = lo;
        lo *= 2.0;
        if lo < -1e300 {
            return lo;
        }
    }
    let mut x = lo;
    for _ in 0..200 {
        let fx = f(x);
        if fx == 0.0 {
            return x;
        }
        if fx < 0.0 {
            lo = x;
        } else {
            hi = x;
        }
        // d/dx ln F(x) = pdf / F
        let deriv = t_pdf(x, df) / t_lower_tail(x, df);
        let mut next = x - fx / deriv;
        if !(next > lo && next < hi) || !next.is_finite() {
            next = 0.5 * (lo + hi);
        }
        if (next - x).abs() <= 1e-15 * x.abs().max(1e-300) {
            return next;
        }
        x = next;
    }
    x
}

pub(crate) fn check_df(df: f64) -> Result<()> {
    if df.is_nan() || df <= 0.0 {
        return Err(Error::invalid(
            "df",
            format!("degrees of freedom must be positive, got {df}"),
        ));
    }
    Ok(())
}

/// Quantile of `S = sqrt(X / df)` with `X ~ chi^2(df)`: the scale variable
/// that turns a multivariate normal into a multivariate t.
pub fn chi_scale_quantile(u: f64, df: f64) -> f64 {
    chi_scale_from_tails(u, 1.0 - u, df)
}

/// As [`chi_scale_quantile`] with both tail probabilities supplied, so
/// `u` close to 1 keeps full precision.
pub(crate) fn chi_scale_from_tails(u: f64, upper: f64, df: f64) -> f64 {
    if u <= 0.0 {
        return 0.0;
    }
    if upper <= 0.0 {
        return f64::INFINITY;
    }
    let a = 0.5 * df;
    // Wilson-Hilferty start for the chi-square quantile.
    let z = if u < 0.5 {
        norm_quantile(u)
    } else {
        -norm_quantile(upper)
    };
    let h = 2.0 / (9.0 * df);
    let mut x = df * (1.0 - h + z * h.sqrt()).powi(3);
    if !(x > 0.0) || !x.is_finite() {
        // small-u expansion P(a, y) ~ y^a / Gamma(a + 1)
        x = 2.0 * ((u.ln() + ln_gamma(a + 1.0)) / a).exp();
        if !(x > 0.0) || !x.is_finite() {
            x = 1e-300;
        }
    }
    let lower = u < 0.5;
    let ln_gamma_a = ln_gamma(a);
    let mut lo = 0.0_f64;
    let mut hi = f64::INFINITY;
    // Newton on the regularised incomplete gamma in y = x / 2.
    let mut y = 0.5 * x;
    for _ in 0..100 {
        let (fy, sign) = if lower {
            (gamma_lr(a, y) - u, 1.0)
        } else {
            (gamma_ur(a, y) - upper, -1.0)
        };
        // P(a, y) is increasing in y.
        if fy * sign < 0.0 {
            lo = y;
        } else {
            hi = y;
        }
        let dens = ((a - 1.0) * y.ln() - y - ln_gamma_a).exp();
        let mut next = y - sign * fy / dens;
        if !(next > lo && next < hi) || !next.is_finite() {
            next = if hi.is_finite() {
                0.5 * (lo + hi)
            } else {
                2.0 * y.max(1e-300)
            };
        }
        if (next - y).abs() <= 1e-13 * y {
            y = next;
            break;
        }
        y = next;
    }
    (2.0 * y / df).sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn t_cdf_is_symmetric_at_zero() {
        assert_eq!(t_cdf(0.0, 7.0), 0.5);
        assert_eq!(t_quantile(0.5, 38.0).unwrap(), 0.0);
    }

    #[test]
    fn t_with_huge_df_matches_normal() {
        for &x in &[-2.0, 0.0, 2.0] {
            assert_abs_diff_eq!(t_cdf(x, 1e6), norm_cdf(x), epsilon = 1e-4);
        }
    }

    #[test]
    fn t_quantile_roundtrip() {
        for &df in &[0.5, 1.0, 2.5, 10.0, 38.0, 51.0, 1e4, 1e6, f64::INFINITY] {
            for &p in &[
                1e-12,
                1e-6,
                0.01,
                0.05,
                0.3,
                0.5,
                0.7,
                0.95,
                0.999,
                1.0 - 1e-9,
            ] {
                let q = t_quantile(p, df).unwrap();
                let back = t_cdf(q, df);
                assert!((back - p).abs() < 1e-10, "df={df} p={p} q={q} back={back}");
            }
        }
    }

    #[test]
    fn known_t_values() {
        // R: qt(0.95, 38) = 1.685954, pt(-3, 5) = 0.01504962
        assert_abs_diff_eq!(t_quantile(0.95, 38.0).unwrap(), 1.685_954, epsilon = 1e-6);
        assert_abs_diff_eq!(t_cdf(-3.0, 5.0), 0.015_049_62, epsilon = 1e-8);
        // R: pt(7.545549, 51, lower.tail = FALSE) = 3.751384e-10
        let tail = t_sf(7.545_549_44, 51.0);
        assert!((tail / 3.751_384e-10 - 1.0).abs() < 1e-5, "{tail}");
    }

    #[test]
    fn normal_quantile_roundtrip() {
        for &p in &[1e-300, 1e-20, 1e-5, 0.02425, 0.3, 0.5, 0.9, 1.0 - 1e-12] {
            let x = norm_quantile(p);
            let back = if x < 0.0 {
                norm_cdf(x)
            } else {
                1.0 - norm_sf(x)
            };
            assert!(((back - p) / p).abs() < 1e-12, "p={p} x={x} back={back}");
        }
        assert_abs_diff_eq!(norm_quantile(0.975), 1.959_963_984_540_054, epsilon = 1e-14);
    }

    #[test]
    fn chi_scale_quantile_inverts_gamma() {
        for &df in &[0.7, 1.0, 3.0, 10.0, 38.0, 1e3, 1e6] {
            for &u in &[1e-10, 1e-3, 0.2, 0.5, 0.8, 0.999, 1.0 - 1e-10] {
                let s = chi_scale_quantile(u, df);
                let x = 0.5 * df * s * s;
                let back = if u < 0.5 {
                    gamma_lr(0.5 * df, x)
                } else {
                    1.0 - gamma_ur(0.5 * df, x)
                };
                assert!(
                    (back - u).abs() < 1e-9 * u.max(1e-3),
                    "df={df} u={u} back={back}"
                );
            }
        }
    }
}
