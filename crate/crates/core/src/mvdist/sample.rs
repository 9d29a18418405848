use nalgebra::DMatrix;
use rand::Rng;
use rand_distr::StandardNormal;

use super::correlation::{factor_psd, CorrelationMatrix};
use crate::error::{Error, Result};

/// Draws `n` i.i.d. rows from a multivariate normal with means `mu`, standard
/// deviations `sigma` and correlation `r` (covariance `D R D`, `D = diag(sigma)`).
///
/// The output is an `n x J` matrix. Rows are generated in order, each from `J`
/// consecutive standard normal draws, so a fixed seed fixes the sample.
pub fn mvn_sample<R: Rng + ?Sized>(
    n: usize,
    mu: &[f64],
    sigma: &[f64],
    r: &CorrelationMatrix,
    rng: &mut R,
) -> Result<DMatrix<f64>> {
    let factor = prepare(mu, sigma, r)?;
    let mut out = DMatrix::zeros(n, mu.len());
    fill_rows(&mut out, 0..n, mu, sigma, &factor, rng);
    Ok(out)
}

pub(crate) fn prepare(mu: &[f64], sigma: &[f64], r: &CorrelationMatrix) -> Result<DMatrix<f64>> {
    let j = r.dim();
    if mu.len() != j {
        return Err(Error::DimensionMismatch {
            expected: j,
            actual: mu.len(),
        });
    }
    if sigma.len() != j {
        return Err(Error::DimensionMismatch {
            expected: j,
            actual: sigma.len(),
        });
    }
    if let Some((index, &value)) = sigma
        .iter()
        .enumerate()
        .find(|(_, s)| !(**s > 0.0) || !s.is_finite())
    {
        return Err(Error::InvalidSigma { index, value });
    }
    factor_psd(r)
}

/// Fills `rows` of `out` with draws, using a precomputed factor.
pub(crate) fn fill_rows<R: Rng + ?Sized>(
    out: &mut DMatrix<f64>,
    rows: std::ops::Range<usize>,
    mu: &[f64],
    sigma: &[f64],
    factor: &DMatrix<f64>,
    rng: &mut R,
) {
    let j = mu.len();
    let mut z = vec![0.0; j];
    for row in rows {
        for zk in z.iter_mut() {
            *zk = rng.sample(StandardNormal);
        }
        for c in 0..j {
            let mut v = 0.0;
            for k in 0..=c {
                v += factor[(c, k)] * z[k];
            }
            out[(row, c)] = mu[c] + sigma[c] * v;
        }
    }
}
