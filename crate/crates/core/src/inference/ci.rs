use super::pvalues::{default_options, Alternative};
use crate::error::{Error, Result};
use crate::models::JointInference;
use crate::mvdist::{quantile_with, MvtIntegrator, MvtOptions, Tail};

/// Simultaneous confidence limits for all contrasts of a family.
#[derive(Debug, Clone, PartialEq)]
pub struct SimultaneousCI {
    pub lower: Vec<f64>,
    pub upper: Vec<f64>,
    pub level: f64,
    pub quantile: f64,
}

pub fn simultaneous_ci(
    ji: &JointInference,
    level: f64,
    alternative: Alternative,
) -> Result<SimultaneousCI> {
    let opts = MvtOptions {
        abs_tol: 2e-6,
        ..default_options()
    };
    let integ = MvtIntegrator::new(ji.df, opts)?;
    simultaneous_ci_with(&integ, ji, level, alternative)
}

pub fn simultaneous_ci_with(
    integ: &MvtIntegrator,
    ji: &JointInference,
    level: f64,
    alternative: Alternative,
) -> Result<SimultaneousCI> {
    if !(level > 0.0 && level < 1.0) {
        return Err(Error::invalid(
            "level",
            format!("must lie in (0, 1), got {level}"),
        ));
    }
    let tail = match alternative {
        Alternative::TwoSided => Tail::Both,
        _ => Tail::Lower,
    };
    let q = quantile_with(integ, level, &ji.corr, tail)?;
    let margin = ji.std_errors.iter().map(|se| q * se);
    let (lower, upper) = ji
        .estimates
        .iter()
        .zip(margin)
        .map(|(&est, w)| match alternative {
            Alternative::Greater => (est - w, f64::INFINITY),
            Alternative::Less => (f64::NEG_INFINITY, est + w),
            Alternative::TwoSided => (est - w, est + w),
        })
        .unzip();
    Ok(SimultaneousCI {
        lower,
        upper,
        level,
        quantile: q,
    })
}
