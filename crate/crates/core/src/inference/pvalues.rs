use crate::error::{Error, Result};
use crate::models::JointInference;
use crate::mvdist::univariate::{is_normal_df, norm_cdf, norm_sf};
use crate::mvdist::{t_cdf, t_sf, CorrelationMatrix, MvtIntegrator, MvtOptions, RelativeTo};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum Alternative {
    #[default]
    Greater,
    Less,
    TwoSided,
}

/// How per-endpoint p-values are formed when an endpoint carries several contrasts.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum MarginalMode {
    /// Plain univariate t p-value for every hypothesis.
    Univariate,
    /// Single-step max-T adjustment within each endpoint; univariate for
    /// endpoints with one contrast.
    #[default]
    WithinEndpoint,
}

/// Integrator settings used when the caller does not supply one.
pub fn default_options() -> MvtOptions {
    MvtOptions {
        abs_tol: 1e-5,
        ..MvtOptions::default()
    }
}

/// Univariate p-value of a t statistic.
pub fn raw_p(t: f64, df: f64, alternative: Alternative) -> f64 {
    let sf = |x: f64| {
        if is_normal_df(df) {
            norm_sf(x)
        } else {
            t_sf(x, df)
        }
    };
    let cdf = |x: f64| {
        if is_normal_df(df) {
            norm_cdf(x)
        } else {
            t_cdf(x, df)
        }
    };
    match alternative {
        Alternative::Greater => sf(t),
        Alternative::Less => cdf(t),
        Alternative::TwoSided => (2.0 * sf(t.abs())).min(1.0),
    }
}

pub fn maxt_adjusted_p(ji: &JointInference, alternative: Alternative) -> Result<Vec<f64>> {
    let integ = MvtIntegrator::new(ji.df, default_options())?;
    maxt_adjusted_p_with(&integ, ji, alternative)
}

/// Single-step max-T adjusted p-values using a prepared integrator.
pub fn maxt_adjusted_p_with(
    integ: &MvtIntegrator,
    ji: &JointInference,
    alternative: Alternative,
) -> Result<Vec<f64>> {
    adjusted_p_block(integ, &ji.t_stats, &ji.corr, alternative)
}

/// Adjusted p-value for each statistic in `t` against the family `corr`.
///
/// Results are clamped to `[raw, min(1, M * raw)]`, the range the exact value
/// is known to lie in, so integration noise cannot break those bounds. When
/// the integrator carries a decision level and these bounds already place a
/// value on one side of it, the bound is returned without integrating.
pub fn adjusted_p_block(
    integ: &MvtIntegrator,
    t: &[f64],
    corr: &CorrelationMatrix,
    alternative: Alternative,
) -> Result<Vec<f64>> {
    let m = t.len();
    if corr.dim() != m {
        return Err(Error::DimensionMismatch {
            expected: corr.dim(),
            actual: m,
        });
    }
    let df = integ.df();
    // p-values are complements; their relative accuracy is what matters
    let integ = integ.relative_to(RelativeTo::Complement);
    t.iter()
        .map(|&ti| {
            let raw = raw_p(ti, df, alternative);
            if m == 1 {
                return Ok(raw);
            }
            let hi = (m as f64 * raw).min(1.0);
            if let Some(level) = integ.options().decision_level {
                if raw >= level {
                    return Ok(raw);
                }
                if hi < level {
                    return Ok(hi);
                }
            }
            let prob = match alternative {
                Alternative::Greater => integ.cdf(&vec![ti; m], corr)?,
                Alternative::Less => integ.cdf(&vec![-ti; m], corr)?,
                Alternative::TwoSided => {
                    let a = ti.abs();
                    integ.rectangle(&vec![-a; m], &vec![a; m], corr)?
                }
            };
            Ok(prob.complement.clamp(0.0, 1.0).clamp(raw, hi))
        })
        .collect()
}

pub fn marginal_p(
    ji: &JointInference,
    alternative: Alternative,
    partition: &[Vec<usize>],
    mode: MarginalMode,
) -> Result<Vec<f64>> {
    let integ = MvtIntegrator::new(ji.df, default_options())?;
    marginal_p_with(&integ, ji, alternative, partition, mode)
}

/// Per-endpoint p-values; `partition` lists the hypotheses of each endpoint.
pub fn marginal_p_with(
    integ: &MvtIntegrator,
    ji: &JointInference,
    alternative: Alternative,
    partition: &[Vec<usize>],
    mode: MarginalMode,
) -> Result<Vec<f64>> {
    let m = ji.len();
    check_partition(partition, m)?;
    let mut out: Vec<f64> = ji
        .t_stats
        .iter()
        .map(|&t| raw_p(t, ji.df, alternative))
        .collect();
    if mode == MarginalMode::Univariate {
        return Ok(out);
    }
    for part in partition.iter().filter(|p| p.len() > 1) {
        let t: Vec<f64> = part.iter().map(|&i| ji.t_stats[i]).collect();
        let adj = adjusted_p_block(integ, &t, &ji.corr.submatrix(part), alternative)?;
        for (&i, p) in part.iter().zip(adj) {
            out[i] = p;
        }
    }
    Ok(out)
}

fn check_partition(partition: &[Vec<usize>], m: usize) -> Result<()> {
    let mut seen = vec![false; m];
    for &i in partition.iter().flatten() {
        if i >= m || seen[i] {
            return Err(Error::PartitionMismatch(m));
        }
        seen[i] = true;
    }
    if seen.iter().all(|&s| s) {
        Ok(())
    } else {
        Err(Error::PartitionMismatch(m))
    }
}
