//! Tabulated inverse of the scale variable `S = sqrt(chi^2_df / df)`.
//!
//! The lattice integrator needs `S` at every evaluation point; solving the
//! incomplete gamma equation each time dominates the cost, so `ln S` is
//! tabulated against `z = Φ⁻¹(u)` once per `df` and read back by cubic
//! Hermite interpolation.

use statrs::function::gamma::ln_gamma;

use super::univariate::{
    chi_scale_from_tails, chi_scale_quantile, norm_cdf, norm_pdf, norm_quantile_fast,
};

const Z_MIN: f64 = -8.5;
const Z_MAX: f64 = 8.5;
const NODES: usize = 1025;

#[derive(Debug, Clone)]
pub struct ChiScaleTable {
    df: f64,
    step: f64,
    ln_s: Vec<f64>,
    slope: Vec<f64>,
}

impl ChiScaleTable {
    pub fn new(df: f64) -> Self {
        let step = (Z_MAX - Z_MIN) / (NODES - 1) as f64;
        let mut ln_s = Vec::with_capacity(NODES);
        let mut slope = Vec::with_capacity(NODES);
        for k in 0..NODES {
            let z = Z_MIN + step * k as f64;
            let s = chi_scale_from_tails(norm_cdf(z), norm_cdf(-z), df);
            ln_s.push(s.ln());
            // d ln s / dz = φ(z) / (f_S(s) s)
            slope.push(norm_pdf(z) / (density(s, df) * s));
        }
        ChiScaleTable {
            df,
            step,
            ln_s,
            slope,
        }
    }

    pub fn df(&self) -> f64 {
        self.df
    }

    /// Value of `S` at probability `u`.
    pub fn quantile(&self, u: f64) -> f64 {
        if u <= 0.0 {
            return 0.0;
        }
        let z = norm_quantile_fast(u);
        self.at_z(z)
            .unwrap_or_else(|| chi_scale_quantile(u, self.df))
    }

    fn at_z(&self, z: f64) -> Option<f64> {
        if !(z > Z_MIN && z < Z_MAX) {
            return None;
        }
        let pos = (z - Z_MIN) / self.step;
        let k = (pos.floor() as usize).min(NODES - 2);
        let t = pos - k as f64;
        let (y0, y1) = (self.ln_s[k], self.ln_s[k + 1]);
        let (m0, m1) = (self.slope[k] * self.step, self.slope[k + 1] * self.step);
        let t2 = t * t;
        let t3 = t2 * t;
        let v = (2.0 * t3 - 3.0 * t2 + 1.0) * y0
            + (t3 - 2.0 * t2 + t) * m0
            + (-2.0 * t3 + 3.0 * t2) * y1
            + (t3 - t2) * m1;
        Some(v.exp())
    }
}

/// Density of `S = sqrt(X / df)`, `X ~ chi^2(df)`.
pub fn density(s: f64, df: f64) -> f64 {
    if s <= 0.0 {
        return 0.0;
    }
    let a = 0.5 * df;
    let x = df * s * s;
    // f_X(x) = x^(a-1) e^(-x/2) / (2^a Γ(a)); f_S(s) = f_X(x) 2 df s
    let ln_fx = (a - 1.0) * x.ln() - 0.5 * x - a * 2f64.ln() - ln_gamma(a);
    (ln_fx + (2.0 * df * s).ln()).exp()
}
