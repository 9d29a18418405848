use super::correlation::CorrelationMatrix;
use super::mvt::{MvtIntegrator, MvtOptions};
use super::univariate::t_quantile;
use crate::error::{Error, Result};

const BRACKET_LIMIT: f64 = 50.0;

/// Probability tolerance of the root.
pub const QUANTILE_PROB_TOL: f64 = 1e-5;

/// Shape of the equicoordinate region.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Tail {
    /// `T_j <= q` for all `j`.
    Lower,
    /// `|T_j| <= q` for all `j`.
    Both,
}

/// Solves `P(T_j <= q for all j) = p` for `q`.
pub fn equicoordinate_quantile(p: f64, r: &CorrelationMatrix, df: f64) -> Result<f64> {
    let opts = MvtOptions {
        abs_tol: 2e-6,
        ..MvtOptions::default()
    };
    let integ = MvtIntegrator::new(df, opts)?;
    quantile_with(&integ, p, r, Tail::Lower)
}

/// Equicoordinate quantile using a prepared integrator.
///
/// The bracket starts at the univariate quantile (where the joint probability
/// is at most `p`) and the Bonferroni quantile (at least `p`), widened
/// geometrically if integration noise puts the root outside.
pub fn quantile_with(
    integ: &MvtIntegrator,
    p: f64,
    r: &CorrelationMatrix,
    tail: Tail,
) -> Result<f64> {
    if !(p > 0.0 && p < 1.0) {
        return Err(Error::invalid("p", format!("must lie in (0, 1), got {p}")));
    }
    let m = r.dim() as f64;
    let df = integ.df();
    // difference computed on the smaller side for accuracy, with its error bound
    let eval = |q: f64| -> Result<(f64, f64)> {
        let n = r.dim();
        let prob = match tail {
            Tail::Lower => integ.cdf(&vec![q; n], r)?,
            Tail::Both => {
                if q <= 0.0 {
                    return Ok((-p, 0.0));
                }
                integ.rectangle(&vec![-q; n], &vec![q; n], r)?
            }
        };
        let diff = if p > 0.5 {
            (1.0 - p) - prob.complement
        } else {
            prob.value - p
        };
        Ok((diff, prob.error_estimate))
    };
    let f = |q: f64| eval(q).map(|(d, _)| d);
    let (mut lo, mut hi) = match tail {
        Tail::Lower => (t_quantile(p, df)?, t_quantile(1.0 - (1.0 - p) / m, df)?),
        Tail::Both => (
            t_quantile(0.5 + 0.5 * p, df)?,
            t_quantile(1.0 - (1.0 - p) / (2.0 * m), df)?,
        ),
    };
    let mut f_lo = f(lo)?;
    let mut f_hi = f(hi)?;
    let mut width = (hi - lo).abs().max(0.1);
    while f_lo > 0.0 {
        width *= 2.0;
        hi = lo;
        f_hi = f_lo;
        lo -= width;
        if lo < -BRACKET_LIMIT {
            return Err(Error::Nonconvergence(format!(
                "cannot bracket the {p} equicoordinate quantile within [-50, 50]"
            )));
        }
        f_lo = f(lo)?;
    }
    while f_hi < 0.0 {
        width *= 2.0;
        lo = hi;
        f_lo = f_hi;
        hi += width;
        if hi > BRACKET_LIMIT {
            return Err(Error::Nonconvergence(format!(
                "cannot bracket the {p} equicoordinate quantile within [-50, 50]"
            )));
        }
        f_hi = f(hi)?;
    }
    if f_lo == 0.0 {
        return Ok(lo);
    }
    if f_hi == 0.0 {
        return Ok(hi);
    }
    // Illinois-modified regula falsi with bisection fallback.
    let mut side = 0i8;
    for iter in 0..100 {
        let secant = hi - f_hi * (hi - lo) / (f_hi - f_lo);
        let mid = 0.5 * (lo + hi);
        let q = if iter % 4 == 3 || !(secant > lo && secant < hi) {
            mid
        } else {
            secant
        };
        // below the integration error the sign of fq is noise
        let (fq, err) = eval(q)?;
        if fq.abs() <= (QUANTILE_PROB_TOL * 0.1).max(err) || (hi - lo) < 1e-10 {
            return Ok(q);
        }
        if fq < 0.0 {
            lo = q;
            f_lo = fq;
            if side == -1 {
                f_hi *= 0.5;
            }
            side = -1;
        } else {
            hi = q;
            f_hi = fq;
            if side == 1 {
                f_lo *= 0.5;
            }
            side = 1;
        }
    }
    Ok(0.5 * (lo + hi))
}
