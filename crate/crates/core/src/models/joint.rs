use nalgebra::{DMatrix, DVector};

use super::contrasts::ContrastSet;
use super::fit::OneWayFit;
use crate::error::{Error, Result};
use crate::mvdist::CorrelationMatrix;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CovarianceKind {
    /// Classical pooled-variance marginal SEs, cross-endpoint correlation
    /// from influence-function cross-products.
    ModelBased,
    /// HC0 sandwich over the stacked influence functions.
    Sandwich,
}

/// All `m * J` contrast estimates with their joint correlation.
///
/// Hypotheses are ordered endpoint-major: endpoint 0 contrasts first.
#[derive(Debug, Clone, PartialEq)]
pub struct JointInference {
    pub estimates: Vec<f64>,
    pub std_errors: Vec<f64>,
    pub t_stats: Vec<f64>,
    pub df: f64,
    pub corr: CorrelationMatrix,
    pub hypothesis_names: Vec<String>,
    pub covariance_kind: CovarianceKind,
    /// Endpoint index of each hypothesis.
    pub endpoint_of: Vec<usize>,
}

impl JointInference {
    pub fn len(&self) -> usize {
        self.estimates.len()
    }

    pub fn is_empty(&self) -> bool {
        self.estimates.is_empty()
    }

    /// Hypothesis indices grouped by endpoint.
    pub fn endpoint_partition(&self) -> Vec<Vec<usize>> {
        let n_ep = self.endpoint_of.iter().max().map_or(0, |m| m + 1);
        let mut parts = vec![Vec::new(); n_ep];
        for (i, &e) in self.endpoint_of.iter().enumerate() {
            parts[e].push(i);
        }
        parts
    }
}

/// Per-observation influence functions of every contrast estimate, `n x M`.
pub fn influence_matrix(fits: &[OneWayFit], contrasts: &ContrastSet) -> DMatrix<f64> {
    let n = fits[0].residuals.len();
    let m = contrasts.m();
    let mut psi = DMatrix::zeros(n, m * fits.len());
    for (e, fit) in fits.iter().enumerate() {
        for c in 0..m {
            let col = e * m + c;
            for (i, (&g, &r)) in fit.group_index.iter().zip(&fit.residuals).enumerate() {
                let w = contrasts.matrix[(c, g)];
                if w != 0.0 {
                    psi[(i, col)] = w * r / fit.group_sizes[g] as f64;
                }
            }
        }
    }
    psi
}

pub fn joint_inference(
    fits: &[OneWayFit],
    contrasts: &ContrastSet,
    kind: CovarianceKind,
) -> Result<JointInference> {
    let first = fits
        .first()
        .ok_or_else(|| Error::invalid("fits", "at least one fit is required"))?;
    for f in &fits[1..] {
        if f.group_index != first.group_index {
            return Err(Error::MixedDesign(format!(
                "endpoint `{}` was fitted on different group assignments than `{}`",
                f.endpoint, first.endpoint
            )));
        }
    }
    if contrasts.k() != first.k() {
        return Err(Error::DimensionMismatch {
            expected: first.k(),
            actual: contrasts.k(),
        });
    }
    if let Some(g) = first.group_sizes.iter().position(|&s| s == 0) {
        return Err(Error::SingularDesign(format!(
            "group {g} has no observations"
        )));
    }
    let df_min = fits.iter().map(|f| f.df).min().expect("nonempty");
    if fits.iter().any(|f| f.df != df_min) {
        log::warn!("fits disagree on residual df; using the minimum {df_min}");
    }
    if df_min == 0 {
        return Err(Error::SingularDesign(
            "no residual degrees of freedom".into(),
        ));
    }

    let m = contrasts.m();
    let total = m * fits.len();
    let mut estimates = Vec::with_capacity(total);
    let mut names = Vec::with_capacity(total);
    let mut endpoint_of = Vec::with_capacity(total);
    let mut classical_var = Vec::with_capacity(total);
    for (e, fit) in fits.iter().enumerate() {
        let means = DVector::from_column_slice(&fit.group_means);
        let est = &contrasts.matrix * means;
        let s2 = fit.sigma2();
        for c in 0..m {
            estimates.push(est[c]);
            names.push(format!("{}: {}", fit.endpoint, contrasts.names[c]));
            endpoint_of.push(e);
            let q: f64 = (0..fit.k())
                .map(|g| contrasts.matrix[(c, g)].powi(2) / fit.group_sizes[g] as f64)
                .sum();
            classical_var.push(s2 * q);
        }
    }

    let psi = influence_matrix(fits, contrasts);
    let cov_if = psi.transpose() * &psi;
    for i in 0..total {
        let endpoint = &fits[endpoint_of[i]].endpoint;
        if !(cov_if[(i, i)] > 0.0) || !(classical_var[i] > 0.0) {
            return Err(Error::SingularDesign(format!(
                "endpoint `{endpoint}` has zero residual variance for `{}`",
                contrasts.names[i % m]
            )));
        }
    }
    let corr = CorrelationMatrix::from_covariance(&cov_if)?;
    let std_errors: Vec<f64> = match kind {
        CovarianceKind::Sandwich => (0..total).map(|i| cov_if[(i, i)].sqrt()).collect(),
        CovarianceKind::ModelBased => classical_var.iter().map(|v| v.sqrt()).collect(),
    };
    let t_stats = estimates
        .iter()
        .zip(&std_errors)
        .map(|(e, s)| e / s)
        .collect();
    Ok(JointInference {
        estimates,
        std_errors,
        t_stats,
        df: df_min as f64,
        corr,
        hypothesis_names: names,
        covariance_kind: kind,
        endpoint_of,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::models::{dunnett_contrasts, fit_all, Dataset};
    use crate::mvdist::mvn_sample;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn dataset(groups: &[&str], cols: &[&[f64]]) -> Dataset {
        let n = groups.len();
        let flat: Vec<f64> = cols.iter().flat_map(|c| c.iter().copied()).collect();
        let y = DMatrix::from_column_slice(n, cols.len(), &flat);
        let g: Vec<String> = groups.iter().map(|s| s.to_string()).collect();
        let names = (1..=cols.len()).map(|j| format!("Y{j}")).collect();
        Dataset::new(&g, y, names, None).unwrap()
    }

    #[test]
    fn duplicated_endpoint_is_perfectly_correlated() {
        let y = [1.0, 2.5, 0.3, 4.0, 3.1, 5.2, 2.2, 6.0, 4.4];
        let ds = dataset(&["A", "A", "A", "B", "B", "B", "C", "C", "C"], &[&y, &y]);
        let fits = fit_all(&ds).unwrap();
        let c = dunnett_contrasts(3).unwrap();
        for kind in [CovarianceKind::ModelBased, CovarianceKind::Sandwich] {
            let ji = joint_inference(&fits, &c, kind).unwrap();
            assert!((ji.corr.get(0, 2) - 1.0).abs() < 1e-8);
            assert!((ji.corr.get(1, 3) - 1.0).abs() < 1e-8);
        }
    }

    #[test]
    fn model_based_two_sample_matches_pooled_se() {
        let a = [4.1, 5.3, 3.8, 6.0, 5.5];
        let b = [6.2, 7.1, 5.9, 8.4];
        let y: Vec<f64> = a.iter().chain(&b).copied().collect();
        let ds = dataset(&["a", "a", "a", "a", "a", "b", "b", "b", "b"], &[&y]);
        let fits = fit_all(&ds).unwrap();
        let ji = joint_inference(
            &fits,
            &dunnett_contrasts(2).unwrap(),
            CovarianceKind::ModelBased,
        )
        .unwrap();

        let mean = |v: &[f64]| v.iter().sum::<f64>() / v.len() as f64;
        let ss = |v: &[f64]| {
            let m = mean(v);
            v.iter().map(|x| (x - m).powi(2)).sum::<f64>()
        };
        let sp2 = (ss(&a) + ss(&b)) / 7.0;
        let se = (sp2 * (1.0 / 5.0 + 1.0 / 4.0)).sqrt();
        assert!((ji.std_errors[0] - se).abs() < 1e-12);
        assert!((ji.estimates[0] - (mean(&b) - mean(&a))).abs() < 1e-12);
        assert!((ji.t_stats[0] - ji.estimates[0] / se).abs() < 1e-12);
        assert_eq!(ji.df, 7.0);
    }

    #[test]
    fn influence_functions_sum_to_zero() {
        let y1 = [1.0, 2.5, 0.3, 4.0, 3.1, 5.2];
        let y2 = [0.2, -1.0, 0.7, 2.0, 2.9, 1.1];
        let ds = dataset(&["A", "A", "A", "B", "B", "B"], &[&y1, &y2]);
        let fits = fit_all(&ds).unwrap();
        let psi = influence_matrix(&fits, &dunnett_contrasts(2).unwrap());
        for col in psi.column_iter() {
            assert!(col.sum().abs() < 1e-8);
        }
    }

    #[test]
    fn constant_endpoint_is_singular() {
        let y = [3.0; 6];
        let ds = dataset(&["A", "A", "A", "B", "B", "B"], &[&y]);
        let fits = fit_all(&ds).unwrap();
        let err = joint_inference(
            &fits,
            &dunnett_contrasts(2).unwrap(),
            CovarianceKind::Sandwich,
        )
        .unwrap_err();
        assert!(matches!(err, Error::SingularDesign(ref s) if s.contains("Y1")));
    }

    #[test]
    fn mixed_design_rejected() {
        let y = [1.0, 2.5, 0.3, 4.0, 3.1, 5.2];
        let f1 = fit_all(&dataset(&["A", "A", "A", "B", "B", "B"], &[&y])).unwrap();
        let f2 = fit_all(&dataset(&["A", "A", "B", "A", "B", "B"], &[&y])).unwrap();
        let fits = vec![f1[0].clone(), f2[0].clone()];
        let err = joint_inference(
            &fits,
            &dunnett_contrasts(2).unwrap(),
            CovarianceKind::ModelBased,
        )
        .unwrap_err();
        assert!(matches!(err, Error::MixedDesign(_)));
    }

    #[test]
    fn large_sample_recovers_endpoint_correlation() {
        let n = 100_000;
        let r = CorrelationMatrix::equicorrelated(2, 0.9).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let a = mvn_sample(n, &[0.0, 0.0], &[1.0, 2.0], &r, &mut rng).unwrap();
        let b = mvn_sample(n, &[0.5, 1.0], &[1.0, 2.0], &r, &mut rng).unwrap();
        let y = DMatrix::from_fn(
            2 * n,
            2,
            |i, j| if i < n { a[(i, j)] } else { b[(i - n, j)] },
        );
        let g: Vec<String> = (0..2 * n)
            .map(|i| if i < n { "C" } else { "T" }.to_string())
            .collect();
        let ds = Dataset::new(&g, y, vec!["E1".into(), "E2".into()], None).unwrap();
        let ji = joint_inference(
            &fit_all(&ds).unwrap(),
            &dunnett_contrasts(2).unwrap(),
            CovarianceKind::ModelBased,
        )
        .unwrap();
        assert!(
            (ji.corr.get(0, 1) - 0.9).abs() < 0.01,
            "{}",
            ji.corr.get(0, 1)
        );
    }
}
