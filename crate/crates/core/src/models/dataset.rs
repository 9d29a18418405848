use nalgebra::DMatrix;

use crate::error::{Error, Result};

/// Group-labelled `n x J` response matrix.
///
/// Group levels are kept in sorted label order (numerically when labels are
/// numbers, such as doses) with the control moved to the front, so level `0`
/// is always the control.
#[derive(Debug, Clone, PartialEq)]
pub struct Dataset {
    levels: Vec<String>,
    group_index: Vec<usize>,
    responses: DMatrix<f64>,
    endpoint_names: Vec<String>,
}

/// Numbers first, in numeric order, then other labels lexicographically.
fn compare_labels(a: &str, b: &str) -> std::cmp::Ordering {
    match (a.trim().parse::<f64>(), b.trim().parse::<f64>()) {
        (Ok(x), Ok(y)) => x.total_cmp(&y).then_with(|| a.cmp(b)),
        (Ok(_), Err(_)) => std::cmp::Ordering::Less,
        (Err(_), Ok(_)) => std::cmp::Ordering::Greater,
        (Err(_), Err(_)) => a.cmp(b),
    }
}

impl Dataset {
    /// `control = None` picks the first label in sorted order.
    pub fn new(
        groups: &[String],
        responses: DMatrix<f64>,
        endpoint_names: Vec<String>,
        control: Option<&str>,
    ) -> Result<Self> {
        let mut levels: Vec<String> = groups.to_vec();
        levels.sort_by(|a, b| compare_labels(a, b));
        levels.dedup();
        if let Some(c) = control {
            let pos = levels
                .iter()
                .position(|l| l == c)
                .ok_or_else(|| Error::invalid("control", format!("no group labelled `{c}`")))?;
            let label = levels.remove(pos);
            levels.insert(0, label);
        }
        let group_index = groups
            .iter()
            .map(|g| {
                levels
                    .iter()
                    .position(|l| l == g)
                    .expect("label is a level")
            })
            .collect();
        Self::from_levels(levels, group_index, responses, endpoint_names)
    }

    /// Builds from explicit levels (level 0 is the control) and per-row level indices.
    pub fn from_levels(
        levels: Vec<String>,
        group_index: Vec<usize>,
        responses: DMatrix<f64>,
        endpoint_names: Vec<String>,
    ) -> Result<Self> {
        let n = responses.nrows();
        if group_index.len() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                actual: group_index.len(),
            });
        }
        if endpoint_names.len() != responses.ncols() {
            return Err(Error::DimensionMismatch {
                expected: responses.ncols(),
                actual: endpoint_names.len(),
            });
        }
        if responses.ncols() == 0 {
            return Err(Error::invalid(
                "responses",
                "at least one endpoint is required",
            ));
        }
        if levels.len() < 2 {
            return Err(Error::InvalidK(levels.len()));
        }
        if let Some(&bad) = group_index.iter().find(|&&g| g >= levels.len()) {
            return Err(Error::invalid(
                "groups",
                format!("level index {bad} out of range"),
            ));
        }
        if let Some(pos) = responses.iter().position(|v| !v.is_finite()) {
            let (row, col) = (pos % n, pos / n);
            return Err(Error::invalid(
                "responses",
                format!(
                    "row {} endpoint `{}` is missing or not finite",
                    row + 1,
                    endpoint_names[col]
                ),
            ));
        }
        let ds = Dataset {
            levels,
            group_index,
            responses,
            endpoint_names,
        };
        for (g, &size) in ds.group_sizes().iter().enumerate() {
            if size < 2 {
                return Err(Error::DegenerateGroup {
                    group: ds.levels[g].clone(),
                    size,
                });
            }
        }
        Ok(ds)
    }

    pub fn n(&self) -> usize {
        self.responses.nrows()
    }

    pub fn k(&self) -> usize {
        self.levels.len()
    }

    pub fn n_endpoints(&self) -> usize {
        self.responses.ncols()
    }

    pub fn levels(&self) -> &[String] {
        &self.levels
    }

    pub fn group_index(&self) -> &[usize] {
        &self.group_index
    }

    pub fn responses(&self) -> &DMatrix<f64> {
        &self.responses
    }

    pub fn endpoint_names(&self) -> &[String] {
        &self.endpoint_names
    }

    pub fn group_sizes(&self) -> Vec<usize> {
        let mut sizes = vec![0; self.k()];
        for &g in &self.group_index {
            sizes[g] += 1;
        }
        sizes
    }

    /// Group label of each row.
    pub fn group_labels(&self) -> Vec<&str> {
        self.group_index
            .iter()
            .map(|&g| self.levels[g].as_str())
            .collect()
    }
}
