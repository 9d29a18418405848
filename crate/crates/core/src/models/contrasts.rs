use nalgebra::DMatrix;

use crate::error::{Error, Result};

/// Rows of contrast coefficients over the `k` group means.
#[derive(Debug, Clone, PartialEq)]
pub struct ContrastSet {
    pub matrix: DMatrix<f64>,
    pub names: Vec<String>,
}

impl ContrastSet {
    pub fn new(matrix: DMatrix<f64>, names: Vec<String>) -> Result<Self> {
        if names.len() != matrix.nrows() {
            return Err(Error::DimensionMismatch {
                expected: matrix.nrows(),
                actual: names.len(),
            });
        }
        for (i, row) in matrix.row_iter().enumerate() {
            let s: f64 = row.iter().sum();
            let scale: f64 = row.iter().map(|v| v.abs()).sum();
            if scale == 0.0 || s.abs() > 1e-12 * scale {
                return Err(Error::invalid(
                    "contrasts",
                    format!("row {i} must be nonzero and sum to zero"),
                ));
            }
        }
        Ok(ContrastSet { matrix, names })
    }

    pub fn m(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn k(&self) -> usize {
        self.matrix.ncols()
    }

    /// Renames Dunnett rows as `"<control> vs <treatment>"` from group labels.
    pub fn with_labels(mut self, levels: &[String]) -> Result<Self> {
        if levels.len() != self.k() {
            return Err(Error::DimensionMismatch {
                expected: self.k(),
                actual: levels.len(),
            });
        }
        for (i, name) in self.names.iter_mut().enumerate() {
            let row = self.matrix.row(i);
            let neg = row.iter().position(|&v| v < 0.0);
            let pos = row.iter().position(|&v| v > 0.0);
            if let (Some(a), Some(b)) = (neg, pos) {
                *name = format!("{} vs {}", levels[a], levels[b]);
            }
        }
        Ok(self)
    }
}

/// Many-to-one comparisons of each treatment with the control (column 0).
pub fn dunnett_contrasts(k: usize) -> Result<ContrastSet> {
    if k < 2 {
        return Err(Error::InvalidK(k));
    }
    let mut m = DMatrix::zeros(k - 1, k);
    let mut names = Vec::with_capacity(k - 1);
    for i in 0..k - 1 {
        m[(i, 0)] = -1.0;
        m[(i, i + 1)] = 1.0;
        names.push(format!("C vs D{}", i + 1));
    }
    Ok(ContrastSet { matrix: m, names })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_cases() {
        let c2 = dunnett_contrasts(2).unwrap();
        assert_eq!(c2.matrix, DMatrix::from_row_slice(1, 2, &[-1.0, 1.0]));
        let c3 = dunnett_contrasts(3).unwrap();
        assert_eq!(
            c3.matrix,
            DMatrix::from_row_slice(2, 3, &[-1.0, 1.0, 0.0, -1.0, 0.0, 1.0])
        );
        assert_eq!(c3.names, vec!["C vs D1", "C vs D2"]);
    }

    #[test]
    fn rows_sum_to_zero_with_one_control_entry() {
        let c = dunnett_contrasts(4).unwrap();
        assert_eq!(c.m(), 3);
        for row in c.matrix.row_iter() {
            assert_eq!(row.iter().sum::<f64>(), 0.0);
            assert_eq!(row[0], -1.0);
            assert_eq!(row.iter().filter(|&&v| v == 1.0).count(), 1);
        }
    }

    #[test]
    fn k_below_two_rejected() {
        assert_eq!(dunnett_contrasts(1).unwrap_err(), Error::InvalidK(1));
    }

    #[test]
    fn labels_rename_rows() {
        let levels: Vec<String> = ["C", "5", "20"].iter().map(|s| s.to_string()).collect();
        let c = dunnett_contrasts(3).unwrap().with_labels(&levels).unwrap();
        assert_eq!(c.names, vec!["C vs 5", "C vs 20"]);
    }

    #[test]
    fn non_contrast_rejected() {
        let m = DMatrix::from_row_slice(1, 2, &[1.0, 1.0]);
        assert!(ContrastSet::new(m, vec!["x".into()]).is_err());
    }
}
