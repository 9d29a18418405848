//! Bivariate t lower-orthant probabilities for integer degrees of freedom
//! (Dunnett and Sobel finite-sum form, as arranged in Genz's TVPACK).

use std::f64::consts::PI;

use super::univariate::t_cdf;

/// Largest `df` handled by the finite sum; the loop has `df / 2` terms.
pub const MAX_EXACT_DF: f64 = 10_000.0;

pub fn supports(df: f64) -> bool {
    (1.0..=MAX_EXACT_DF).contains(&df) && df.fract() == 0.0
}

/// `P(T1 < h, T2 < k)` for the standard bivariate t with correlation `r`
/// and integer `nu` degrees of freedom.
pub fn bvt_lower(nu: u32, h: f64, k: f64, r: f64) -> f64 {
    if h == f64::NEG_INFINITY || k == f64::NEG_INFINITY {
        return 0.0;
    }
    let df = f64::from(nu);
    if h == f64::INFINITY {
        return if k == f64::INFINITY {
            1.0
        } else {
            t_cdf(k, df)
        };
    }
    if k == f64::INFINITY {
        return t_cdf(h, df);
    }
    const EPS: f64 = 1e-15;
    if 1.0 - r <= EPS {
        return t_cdf(h.min(k), df);
    }
    if r + 1.0 <= EPS {
        return if h > -k {
            t_cdf(h, df) - t_cdf(-k, df)
        } else {
            0.0
        };
    }
    let tpi = 2.0 * PI;
    let ors = 1.0 - r * r;
    let hrk = h - r * k;
    let krh = k - r * h;
    let (xnhk, xnkh) = if hrk.abs() + ors > 0.0 {
        (
            hrk * hrk / (hrk * hrk + ors * (df + k * k)),
            krh * krh / (krh * krh + ors * (df + h * h)),
        )
    } else {
        (0.0, 0.0)
    };
    let hs = if hrk < 0.0 { -1.0 } else { 1.0 };
    let ks = if krh < 0.0 { -1.0 } else { 1.0 };
    let mut bvt;
    if nu.is_multiple_of(2) {
        bvt = ors.sqrt().atan2(-r) / tpi;
        let mut gmph = h / (16.0 * (df + h * h)).sqrt();
        let mut gmpk = k / (16.0 * (df + k * k)).sqrt();
        let mut btnckh = 2.0 * xnkh.sqrt().atan2((1.0 - xnkh).sqrt()) / PI;
        let mut btpdkh = 2.0 * (xnkh * (1.0 - xnkh)).sqrt() / PI;
        let mut btnchk = 2.0 * xnhk.sqrt().atan2((1.0 - xnhk).sqrt()) / PI;
        let mut btpdhk = 2.0 * (xnhk * (1.0 - xnhk)).sqrt() / PI;
        for j in 1..=nu / 2 {
            let j = f64::from(j);
            bvt += gmph * (1.0 + ks * btnckh);
            bvt += gmpk * (1.0 + hs * btnchk);
            btnckh += btpdkh;
            btpdkh = 2.0 * j * btpdkh * (1.0 - xnkh) / (2.0 * j + 1.0);
            btnchk += btpdhk;
            btpdhk = 2.0 * j * btpdhk * (1.0 - xnhk) / (2.0 * j + 1.0);
            gmph = gmph * (2.0 * j - 1.0) / (2.0 * j * (1.0 + h * h / df));
            gmpk = gmpk * (2.0 * j - 1.0) / (2.0 * j * (1.0 + k * k / df));
        }
    } else {
        let snu = df.sqrt();
        let qhrk = (h * h + k * k - 2.0 * r * h * k + df * ors).sqrt();
        let hkrn = h * k + r * df;
        let hkn = h * k - df;
        let hpk = h + k;
        bvt = (-snu * (hkn * qhrk + hpk * hkrn)).atan2(hkn * hkrn - df * hpk * qhrk) / tpi;
        if bvt < -EPS {
            bvt += 1.0;
        }
        let mut gmph = h / (tpi * snu * (1.0 + h * h / df));
        let mut gmpk = k / (tpi * snu * (1.0 + k * k / df));
        let mut btnckh = xnkh.sqrt();
        let mut btpdkh = btnckh;
        let mut btnchk = xnhk.sqrt();
        let mut btpdhk = btnchk;
        for j in 1..=(nu - 1) / 2 {
            let j = f64::from(j);
            bvt += gmph * (1.0 + ks * btnckh);
            bvt += gmpk * (1.0 + hs * btnchk);
            btpdkh = (2.0 * j - 1.0) * btpdkh * (1.0 - xnkh) / (2.0 * j);
            btnckh += btpdkh;
            btpdhk = (2.0 * j - 1.0) * btpdhk * (1.0 - xnhk) / (2.0 * j);
            btnchk += btpdhk;
            gmph = gmph * 2.0 * j / ((2.0 * j + 1.0) * (1.0 + h * h / df));
            gmpk = gmpk * 2.0 * j / ((2.0 * j + 1.0) * (1.0 + k * k / df));
        }
    }
    bvt.clamp(0.0, 1.0)
}

/// `(P(a < T < b), P(T outside the box))` for a bivariate t, each computed
/// on its own so that small values keep their relative precision.
pub fn bvt_rectangle(nu: u32, a: [f64; 2], b: [f64; 2], r: f64) -> (f64, f64) {
    let df = f64::from(nu);
    // P(T1 > x, T2 > y) = P(-T1 < -x, -T2 < -y)
    let upper = |x: f64, y: f64, rr: f64| bvt_lower(nu, -x, -y, rr);
    let marginal_out = |i: usize| t_cdf(a[i], df) + t_cdf(-b[i], df);
    // both coordinates outside their interval: four orthants
    let both_out = bvt_lower(nu, a[0], a[1], r)
        + upper(b[0], b[1], r)
        + bvt_lower(nu, a[0], -b[1], -r)
        + bvt_lower(nu, -b[0], a[1], -r);
    let outside = (marginal_out(0) + marginal_out(1) - both_out).clamp(0.0, 1.0);
    let inside = if outside < 0.5 {
        1.0 - outside
    } else {
        // inclusion-exclusion over the four corners
        (bvt_lower(nu, b[0], b[1], r) - bvt_lower(nu, a[0], b[1], r) - bvt_lower(nu, b[0], a[1], r)
            + bvt_lower(nu, a[0], a[1], r))
        .clamp(0.0, 1.0)
    };
    (inside, outside)
}
