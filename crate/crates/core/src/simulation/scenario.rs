use nalgebra::DMatrix;

use crate::error::{Error, Result};
use crate::mvdist::CorrelationMatrix;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Design {
    /// One treatment against control.
    TwoSample,
    /// Several treatments, each against control.
    Dunnett,
}

/// One row of a power table.
#[derive(Debug, Clone, PartialEq)]
pub struct Scenario {
    pub group_sizes: Vec<usize>,
    /// `k x J`; row 0 is the control group.
    pub means: DMatrix<f64>,
    pub sds: Vec<f64>,
    pub rho: CorrelationMatrix,
    pub alpha: f64,
    pub sims: usize,
    pub seed: u64,
    pub design: Design,
}

impl Scenario {
    /// Builds and validates; `design` follows from the number of groups.
    pub fn new(
        group_sizes: Vec<usize>,
        means: DMatrix<f64>,
        sds: Vec<f64>,
        rho: CorrelationMatrix,
        alpha: f64,
        sims: usize,
        seed: u64,
    ) -> Result<Self> {
        let design = if group_sizes.len() == 2 {
            Design::TwoSample
        } else {
            Design::Dunnett
        };
        let sc = Scenario {
            group_sizes,
            means,
            sds,
            rho,
            alpha,
            sims,
            seed,
            design,
        };
        sc.validate()?;
        Ok(sc)
    }

    pub fn k(&self) -> usize {
        self.group_sizes.len()
    }

    pub fn n_endpoints(&self) -> usize {
        self.sds.len()
    }

    /// Number of hypotheses, `(k - 1) * J`.
    pub fn n_hypotheses(&self) -> usize {
        (self.k() - 1) * self.n_endpoints()
    }

    pub fn validate(&self) -> Result<()> {
        let k = self.k();
        let j = self.n_endpoints();
        if k < 2 {
            return Err(Error::InvalidK(k));
        }
        match self.design {
            Design::TwoSample if k != 2 => {
                return Err(Error::invalid(
                    "design",
                    format!("two-sample design needs 2 groups, got {k}"),
                ))
            }
            Design::Dunnett if k < 3 => {
                return Err(Error::invalid(
                    "design",
                    format!("Dunnett design needs at least 3 groups, got {k}"),
                ))
            }
            _ => {}
        }
        if j == 0 {
            return Err(Error::invalid("sds", "at least one endpoint is required"));
        }
        if let Some((index, &value)) = self
            .sds
            .iter()
            .enumerate()
            .find(|(_, s)| !(**s > 0.0 && s.is_finite()))
        {
            return Err(Error::InvalidSigma { index, value });
        }
        if self.means.nrows() != k || self.means.ncols() != j {
            return Err(Error::invalid(
                "means",
                format!(
                    "expected a {k} x {j} matrix, got {} x {}",
                    self.means.nrows(),
                    self.means.ncols()
                ),
            ));
        }
        if self.means.iter().any(|m| !m.is_finite()) {
            return Err(Error::invalid("means", "must be finite"));
        }
        if self.rho.dim() != j {
            return Err(Error::DimensionMismatch {
                expected: j,
                actual: self.rho.dim(),
            });
        }
        if let Some(g) = self.group_sizes.iter().position(|&n| n < 2) {
            return Err(Error::DegenerateGroup {
                group: format!("group {}", g + 1),
                size: self.group_sizes[g],
            });
        }
        if !(self.alpha > 0.0 && self.alpha < 1.0) {
            return Err(Error::invalid(
                "alpha",
                format!("must lie in (0, 1), got {}", self.alpha),
            ));
        }
        if self.sims == 0 {
            return Err(Error::invalid("sims", "must be at least 1"));
        }
        Ok(())
    }
}
