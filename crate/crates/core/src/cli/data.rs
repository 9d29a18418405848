//! CSV data sets for `analyze` and the embedded dose-finding example.

use nalgebra::DMatrix;

use super::{format, CliError};
use crate::models::Dataset;

/// Dose-finding study with two endpoints: placebo `C` and doses `D1..D3`
/// (5, 20 and 80 mg).
pub const DOSE_FINDING_CSV: &str = include_str!("../../data/dose_finding.csv");

/// Raw columns read from a CSV file.
#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub groups: Vec<String>,
    pub responses: DMatrix<f64>,
    pub endpoint_names: Vec<String>,
}

/// Reads the group column and the endpoint columns (all other columns when
/// `endpoints` is empty).
pub fn read_table(text: &str, group_col: &str, endpoints: &[String]) -> Result<Table, CliError> {
    let mut reader = csv::ReaderBuilder::new()
        .trim(csv::Trim::All)
        .from_reader(text.as_bytes());
    let header: Vec<String> = reader
        .headers()
        .map_err(|e| CliError::schema(format!("header: {e}")))?
        .iter()
        .map(str::to_string)
        .collect();
    let find = |name: &str| {
        header
            .iter()
            .position(|h| h == name)
            .ok_or_else(|| CliError::schema(format!("column `{name}` not found")))
    };
    let group_idx = find(group_col)?;
    let cols: Vec<usize> = if endpoints.is_empty() {
        (0..header.len()).filter(|&i| i != group_idx).collect()
    } else {
        endpoints
            .iter()
            .map(|e| find(e))
            .collect::<Result<_, _>>()?
    };
    if cols.is_empty() {
        return Err(CliError::schema("no endpoint columns"));
    }
    let mut groups = Vec::new();
    let mut values = Vec::new();
    for (r, record) in reader.records().enumerate() {
        // data rows are numbered from 1, after the header
        let row = r + 1;
        let record = record.map_err(|e| CliError::schema(format!("row {row}: {e}")))?;
        groups.push(record.get(group_idx).unwrap_or_default().to_string());
        for &c in &cols {
            let cell = record.get(c).unwrap_or_default();
            let v: f64 = cell
                .parse()
                .ok()
                .filter(|v: &f64| v.is_finite())
                .ok_or_else(|| {
                    CliError::schema(format!(
                        "row {row}, column `{}`: `{cell}` is not a number",
                        header[c]
                    ))
                })?;
            values.push(v);
        }
    }
    if groups.is_empty() {
        return Err(CliError::schema("no data rows"));
    }
    Ok(Table {
        responses: DMatrix::from_row_slice(groups.len(), cols.len(), &values),
        groups,
        endpoint_names: cols.iter().map(|&c| header[c].clone()).collect(),
    })
}

impl Table {
    pub fn into_dataset(self, control: Option<&str>) -> Result<Dataset, CliError> {
        Dataset::new(&self.groups, self.responses, self.endpoint_names, control)
            .map_err(CliError::from)
    }

    /// Writes the group column followed by the endpoints; values print in
    /// shortest round-trip form.
    pub fn to_csv(&self, group_col: &str) -> String {
        let mut out = String::from(group_col);
        for name in &self.endpoint_names {
            out.push(',');
            out.push_str(name);
        }
        out.push('\n');
        for (g, row) in self.groups.iter().zip(self.responses.row_iter()) {
            out.push_str(g);
            for v in row.iter() {
                out.push(',');
                out.push_str(&format::input(*v));
            }
            out.push('\n');
        }
        out
    }
}

/// The example data with doses labelled by their strength and endpoints
/// named `EP1`, `EP2`.
pub fn dose_finding() -> Table {
    let mut t = read_table(DOSE_FINDING_CSV, "Dose", &["Y1".into(), "Y2".into()])
        .expect("embedded data is valid");
    for g in &mut t.groups {
        *g = match g.as_str() {
            "D1" => "5",
            "D2" => "20",
            "D3" => "80",
            other => other,
        }
        .to_string();
    }
    t.endpoint_names = vec!["EP1".into(), "EP2".into()];
    t
}
