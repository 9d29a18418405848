use nalgebra::{DMatrix, SymmetricEigen};

use crate::error::{Error, Result};

/// Eigenvalues below this are treated as a violation of positive semidefiniteness.
pub const PSD_TOLERANCE: f64 = -1e-10;

const SYMMETRY_TOLERANCE: f64 = 1e-10;

/// A validated correlation matrix: symmetric, unit diagonal, entries in
/// `[-1, 1]`, positive semidefinite up to [`PSD_TOLERANCE`].
#[derive(Debug, Clone, PartialEq)]
pub struct CorrelationMatrix {
    m: DMatrix<f64>,
}

impl CorrelationMatrix {
    /// Builds from row-major entries.
    pub fn from_row_major(dim: usize, entries: &[f64]) -> Result<Self> {
        if dim == 0 {
            return Err(Error::InvalidCorrelation(
                "dimension must be positive".into(),
            ));
        }
        if entries.len() != dim * dim {
            return Err(Error::DimensionMismatch {
                expected: dim * dim,
                actual: entries.len(),
            });
        }
        Self::from_matrix(DMatrix::from_row_slice(dim, dim, entries))
    }

    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let dim = rows.len();
        let flat: Vec<f64> = rows.iter().flatten().copied().collect();
        if rows.iter().any(|r| r.len() != dim) {
            return Err(Error::InvalidCorrelation(format!(
                "expected {dim} columns in every row"
            )));
        }
        Self::from_row_major(dim, &flat)
    }

    pub fn from_matrix(m: DMatrix<f64>) -> Result<Self> {
        let cm = Self::check_structure(m)?;
        let min_eig = cm.min_eigenvalue();
        if min_eig < PSD_TOLERANCE {
            return Err(Error::NotPsd {
                min_eigenvalue: min_eig,
            });
        }
        Ok(cm)
    }

    fn check_structure(mut m: DMatrix<f64>) -> Result<Self> {
        let dim = m.nrows();
        if dim == 0 || m.ncols() != dim {
            return Err(Error::InvalidCorrelation(format!(
                "matrix must be square and non-empty, got {}x{}",
                m.nrows(),
                m.ncols()
            )));
        }
        for i in 0..dim {
            let d = m[(i, i)];
            if !d.is_finite() || (d - 1.0).abs() > SYMMETRY_TOLERANCE {
                return Err(Error::InvalidCorrelation(format!(
                    "diagonal entry {i} is {d}, expected 1"
                )));
            }
            m[(i, i)] = 1.0;
            for j in 0..i {
                let (a, b) = (m[(i, j)], m[(j, i)]);
                if !a.is_finite() || !b.is_finite() {
                    return Err(Error::InvalidCorrelation(format!(
                        "entry ({i}, {j}) is not finite"
                    )));
                }
                if (a - b).abs() > SYMMETRY_TOLERANCE {
                    return Err(Error::InvalidCorrelation(format!(
                        "not symmetric at ({i}, {j}): {a} vs {b}"
                    )));
                }
                let v = 0.5 * (a + b);
                if v.abs() > 1.0 + SYMMETRY_TOLERANCE {
                    return Err(Error::InvalidCorrelation(format!(
                        "entry ({i}, {j}) = {v} outside [-1, 1]"
                    )));
                }
                let v = v.clamp(-1.0, 1.0);
                m[(i, j)] = v;
                m[(j, i)] = v;
            }
        }
        Ok(CorrelationMatrix { m })
    }

    pub fn identity(dim: usize) -> Self {
        CorrelationMatrix {
            m: DMatrix::identity(dim, dim),
        }
    }

    /// All off-diagonal entries equal to `rho`.
    pub fn equicorrelated(dim: usize, rho: f64) -> Result<Self> {
        let mut m = DMatrix::from_element(dim, dim, rho);
        m.fill_diagonal(1.0);
        Self::from_matrix(m)
    }

    /// Normalises a covariance matrix to a correlation matrix.
    pub fn from_covariance(cov: &DMatrix<f64>) -> Result<Self> {
        let n = cov.nrows();
        let sd: Vec<f64> = (0..n).map(|i| cov[(i, i)].sqrt()).collect();
        if let Some(i) = sd.iter().position(|s| !(*s > 0.0) || !s.is_finite()) {
            return Err(Error::SingularDesign(format!(
                "variance of component {i} is {}",
                cov[(i, i)]
            )));
        }
        let m = DMatrix::from_fn(n, n, |i, j| {
            if i == j {
                1.0
            } else {
                (cov[(i, j)] / (sd[i] * sd[j])).clamp(-1.0, 1.0)
            }
        });
        // A covariance built from cross-products is PSD up to rounding.
        let m = 0.5 * (&m + m.transpose());
        Self::from_matrix(m)
    }

    pub fn dim(&self) -> usize {
        self.m.nrows()
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.m[(i, j)]
    }

    pub fn as_matrix(&self) -> &DMatrix<f64> {
        &self.m
    }

    pub fn to_rows(&self) -> Vec<Vec<f64>> {
        (0..self.dim())
            .map(|i| (0..self.dim()).map(|j| self.m[(i, j)]).collect())
            .collect()
    }

    pub fn min_eigenvalue(&self) -> f64 {
        SymmetricEigen::new(self.m.clone())
            .eigenvalues
            .iter()
            .copied()
            .fold(f64::INFINITY, f64::min)
    }

    /// Principal submatrix on `idx` (in the given order).
    pub fn submatrix(&self, idx: &[usize]) -> CorrelationMatrix {
        CorrelationMatrix {
            m: DMatrix::from_fn(idx.len(), idx.len(), |i, j| self.m[(idx[i], idx[j])]),
        }
    }

    /// Common off-diagonal value when the matrix is equicorrelated.
    pub fn common_correlation(&self) -> Option<f64> {
        let n = self.dim();
        if n < 2 {
            return None;
        }
        let rho = self.m[(1, 0)];
        for i in 0..n {
            for j in 0..i {
                if (self.m[(i, j)] - rho).abs() > 1e-12 {
                    return None;
                }
            }
        }
        Some(rho)
    }
}

/// Lower-triangular `L` with `L Lᵀ = R`.
///
/// Uses a Cholesky decomposition when `R` is numerically positive definite and
/// otherwise a spectral factor with negative eigenvalues clipped to zero,
/// re-triangularised by a QR decomposition.
pub fn factor_psd(r: &CorrelationMatrix) -> Result<DMatrix<f64>> {
    let n = r.dim();
    if let Some(ch) = nalgebra::Cholesky::new(r.m.clone()) {
        let l = ch.l();
        let min_diag = (0..n).map(|i| l[(i, i)]).fold(f64::INFINITY, f64::min);
        if min_diag > 1e-7 {
            return Ok(l);
        }
    }
    let eig = SymmetricEigen::new(r.m.clone());
    let min_eig = eig
        .eigenvalues
        .iter()
        .copied()
        .fold(f64::INFINITY, f64::min);
    if min_eig < PSD_TOLERANCE {
        return Err(Error::NotPsd {
            min_eigenvalue: min_eig,
        });
    }
    let mut b = eig.eigenvectors.clone();
    for (j, lambda) in eig.eigenvalues.iter().enumerate() {
        let s = lambda.max(0.0).sqrt();
        b.column_mut(j).scale_mut(s);
    }
    // B Bᵀ = R; with Bᵀ = Q U we get R = Uᵀ U and L = Uᵀ.
    let qr = b.transpose().qr();
    let mut l = qr.r().transpose();
    for j in 0..n {
        if l[(j, j)] < 0.0 {
            l.column_mut(j).neg_mut();
        }
    }
    // Clean the strictly upper part and tiny noise on the diagonal.
    for i in 0..n {
        for j in (i + 1)..n {
            l[(i, j)] = 0.0;
        }
        if l[(i, i)].abs() < 1e-12 {
            l[(i, i)] = 0.0;
        }
    }
    Ok(l)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn max_reconstruction_error(r: &CorrelationMatrix, l: &DMatrix<f64>) -> f64 {
        (l * l.transpose() - r.as_matrix()).abs().max()
    }

    #[test]
    fn identity_factor_is_identity() {
        let r = CorrelationMatrix::identity(2);
        let l = factor_psd(&r).unwrap();
        assert_eq!(l, DMatrix::identity(2, 2));
    }

    #[test]
    fn perfect_correlation_is_rank_one() {
        let r = CorrelationMatrix::equicorrelated(2, 1.0).unwrap();
        let l = factor_psd(&r).unwrap();
        let expected = DMatrix::from_row_slice(2, 2, &[1.0, 0.0, 1.0, 0.0]);
        assert!((&l - expected).abs().max() < 1e-12, "{l}");
    }

    #[test]
    fn equicorrelated_factor_multiplies_back() {
        let r = CorrelationMatrix::equicorrelated(3, 0.9).unwrap();
        let l = factor_psd(&r).unwrap();
        assert!(max_reconstruction_error(&r, &l) < 1e-8);
        for i in 0..3 {
            for j in (i + 1)..3 {
                assert_eq!(l[(i, j)], 0.0);
            }
        }
    }

    #[test]
    fn rank_deficient_mixed_signs() {
        let r = CorrelationMatrix::from_rows(&[
            vec![1.0, -1.0, 0.5],
            vec![-1.0, 1.0, -0.5],
            vec![0.5, -0.5, 1.0],
        ])
        .unwrap();
        let l = factor_psd(&r).unwrap();
        assert!(max_reconstruction_error(&r, &l) < 1e-8);
    }

    #[test]
    fn rejects_indefinite() {
        let err = CorrelationMatrix::from_rows(&[
            vec![1.0, 0.9, -0.9],
            vec![0.9, 1.0, 0.9],
            vec![-0.9, 0.9, 1.0],
        ])
        .unwrap_err();
        assert!(matches!(err, Error::NotPsd { .. }));
    }

    #[test]
    fn rejects_bad_structure() {
        assert!(CorrelationMatrix::from_rows(&[vec![1.0, 1.5], vec![1.5, 1.0]]).is_err());
        assert!(CorrelationMatrix::from_rows(&[vec![1.0, 0.2], vec![0.3, 1.0]]).is_err());
        assert!(CorrelationMatrix::from_rows(&[vec![2.0, 0.2], vec![0.2, 1.0]]).is_err());
    }
}
