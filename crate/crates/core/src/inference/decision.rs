use super::pvalues::Alternative;
use crate::error::{Error, Result};

/// Global decisions of IUT, UIT and aiaUIT at one level.
#[derive(Debug, Clone, PartialEq)]
pub struct TestOutcome {
    pub raw_p: Vec<f64>,
    pub adjusted_p: Vec<f64>,
    pub alpha: f64,
    pub alternative: Alternative,
    /// Every raw p-value below `alpha`.
    pub iut_reject: bool,
    /// Any adjusted p-value below `alpha`.
    pub uit_reject: bool,
    /// Every adjusted p-value below `alpha`.
    pub aia_reject: bool,
    pub p_iut_max: f64,
    pub p_aia_max: f64,
}

pub fn decide(raw_p: &[f64], adjusted_p: &[f64], alpha: f64) -> Result<TestOutcome> {
    if raw_p.len() != adjusted_p.len() {
        return Err(Error::DimensionMismatch {
            expected: raw_p.len(),
            actual: adjusted_p.len(),
        });
    }
    if raw_p.is_empty() {
        return Err(Error::invalid(
            "p-values",
            "at least one hypothesis is required",
        ));
    }
    if !(alpha > 0.0 && alpha < 1.0) {
        return Err(Error::invalid(
            "alpha",
            format!("must lie in (0, 1), got {alpha}"),
        ));
    }
    let max = |v: &[f64]| v.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    Ok(TestOutcome {
        raw_p: raw_p.to_vec(),
        adjusted_p: adjusted_p.to_vec(),
        alpha,
        alternative: Alternative::Greater,
        iut_reject: raw_p.iter().all(|&p| p < alpha),
        uit_reject: adjusted_p.iter().any(|&p| p < alpha),
        aia_reject: adjusted_p.iter().all(|&p| p < alpha),
        p_iut_max: max(raw_p),
        p_aia_max: max(adjusted_p),
    })
}

impl TestOutcome {
    pub fn with_alternative(mut self, alternative: Alternative) -> Self {
        self.alternative = alternative;
        self
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn mixed_decisions() {
        let o = decide(&[0.01, 0.04], &[0.02, 0.06], 0.05).unwrap();
        assert!(o.iut_reject && o.uit_reject && !o.aia_reject);
        assert_eq!(o.p_iut_max, 0.04);
        assert_eq!(o.p_aia_max, 0.06);
    }

    #[test]
    fn all_just_below() {
        let o = decide(&[0.049; 3], &[0.049; 3], 0.05).unwrap();
        assert!(o.iut_reject && o.uit_reject && o.aia_reject);
    }

    #[test]
    fn boundary_is_not_rejection() {
        let o = decide(&[0.05], &[0.05], 0.05).unwrap();
        assert!(!o.iut_reject && !o.uit_reject && !o.aia_reject);
    }

    #[test]
    fn bad_input() {
        assert!(decide(&[0.1], &[0.1, 0.2], 0.05).is_err());
        assert!(decide(&[0.1], &[0.1], 1.0).is_err());
    }
}
