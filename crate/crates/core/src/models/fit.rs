use super::dataset::Dataset;
use crate::error::{Error, Result};

/// Ordinary least squares fit of one endpoint on the group factor.
#[derive(Debug, Clone, PartialEq)]
pub struct OneWayFit {
    pub endpoint: String,
    pub group_means: Vec<f64>,
    pub group_sizes: Vec<usize>,
    pub residual_ss: f64,
    /// Residual degrees of freedom, `n - k`.
    pub df: usize,
    pub residuals: Vec<f64>,
    /// Level index of each observation (level 0 is the control).
    pub group_index: Vec<usize>,
}

impl OneWayFit {
    /// Pooled residual variance `RSS / df`.
    pub fn sigma2(&self) -> f64 {
        self.residual_ss / self.df as f64
    }

    pub fn k(&self) -> usize {
        self.group_means.len()
    }
}

pub fn fit_oneway(data: &Dataset, endpoint: usize) -> Result<OneWayFit> {
    if endpoint >= data.n_endpoints() {
        return Err(Error::invalid(
            "endpoint",
            format!(
                "index {endpoint} out of range for {} endpoints",
                data.n_endpoints()
            ),
        ));
    }
    let k = data.k();
    let sizes = data.group_sizes();
    if let Some(g) = sizes.iter().position(|&s| s < 2) {
        return Err(Error::DegenerateGroup {
            group: data.levels()[g].clone(),
            size: sizes[g],
        });
    }
    let y = data.responses().column(endpoint);
    let groups = data.group_index();
    let mut sums = vec![0.0; k];
    for (&g, &v) in groups.iter().zip(y.iter()) {
        sums[g] += v;
    }
    let means: Vec<f64> = sums
        .iter()
        .zip(&sizes)
        .map(|(s, &n)| s / n as f64)
        .collect();
    let residuals: Vec<f64> = groups
        .iter()
        .zip(y.iter())
        .map(|(&g, &v)| v - means[g])
        .collect();
    let residual_ss = residuals.iter().map(|e| e * e).sum();
    Ok(OneWayFit {
        endpoint: data.endpoint_names()[endpoint].clone(),
        group_means: means,
        group_sizes: sizes,
        residual_ss,
        df: data.n() - k,
        residuals,
        group_index: groups.to_vec(),
    })
}

/// Fits every endpoint of `data`.
pub fn fit_all(data: &Dataset) -> Result<Vec<OneWayFit>> {
    (0..data.n_endpoints())
        .map(|j| fit_oneway(data, j))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use nalgebra::DMatrix;

    fn two_groups(y: &[f64]) -> Dataset {
        let g: Vec<String> = ["A", "A", "B", "B"].iter().map(|s| s.to_string()).collect();
        Dataset::new(
            &g,
            DMatrix::from_column_slice(4, 1, y),
            vec!["Y".into()],
            None,
        )
        .unwrap()
    }

    #[test]
    fn perfect_fit() {
        let f = fit_oneway(&two_groups(&[0.0, 0.0, 1.0, 1.0]), 0).unwrap();
        assert_eq!(f.group_means, vec![0.0, 1.0]);
        assert_eq!(f.residual_ss, 0.0);
        assert_eq!(f.df, 2);
    }

    #[test]
    fn hand_computed_fit() {
        let f = fit_oneway(&two_groups(&[0.0, 2.0, 1.0, 3.0]), 0).unwrap();
        assert_eq!(f.group_means, vec![1.0, 2.0]);
        assert_eq!(f.residual_ss, 4.0);
        assert_eq!(f.df, 2);
        assert_eq!(f.residuals, vec![-1.0, 1.0, -1.0, 1.0]);
    }

    #[test]
    fn endpoint_out_of_range() {
        assert!(fit_oneway(&two_groups(&[0.0, 2.0, 1.0, 3.0]), 1).is_err());
    }
}
