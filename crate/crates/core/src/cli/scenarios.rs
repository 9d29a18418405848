//! JSON scenario files.
//!
//! ```json
//! {
//!   "defaults": { "alpha": 0.05, "sims": 10000, "seed": 17051949 },
//!   "scenarios": [
//!     { "n1": 20, "n2": 20, "ma1": 1, "ma2": 1.7, "mb1": 10, "mb2": 18,
//!       "sa": 1, "sb": 11, "rho": 0.9 }
//!   ]
//! }
//! ```
//!
//! Groups are `n1..nk` (group 1 is the control), endpoints are letters
//! `a, b, ...` with means `m<letter><group>` and standard deviations
//! `s<letter>`. `rho` is a common correlation or a full matrix.

use nalgebra::DMatrix;
use serde::Deserialize;
use serde_json::{Map, Value};

use super::CliError;
use crate::mvdist::CorrelationMatrix;
use crate::simulation::Scenario;

pub const DEFAULT_ALPHA: f64 = 0.05;
pub const DEFAULT_SIMS: usize = 10_000;
pub const DEFAULT_SEED: u64 = 17_051_949;

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct Defaults {
    alpha: Option<f64>,
    sims: Option<usize>,
    seed: Option<u64>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct Document {
    #[serde(default)]
    defaults: Defaults,
    scenarios: Vec<Map<String, Value>>,
}

/// Command-line values that replace both defaults and per-row settings.
#[derive(Debug, Clone, Copy, Default)]
pub struct Overrides {
    pub alpha: Option<f64>,
    pub sims: Option<usize>,
    pub seed: Option<u64>,
}

/// How the correlation was given, kept for echoing.
#[derive(Debug, Clone, PartialEq)]
pub enum RhoSpec {
    Common(f64),
    Matrix(Vec<Vec<f64>>),
}

#[derive(Debug, Clone)]
pub struct ScenarioRecord {
    pub scenario: Scenario,
    pub rho: RhoSpec,
}

pub fn parse(text: &str, overrides: Overrides) -> Result<Vec<ScenarioRecord>, CliError> {
    let doc: Document = serde_json::from_str(text).map_err(|e| {
        CliError::schema(format!(
            "scenario file, line {} column {}: {e}",
            e.line(),
            e.column()
        ))
    })?;
    if doc.scenarios.is_empty() {
        return Err(CliError::schema("scenario file: `scenarios` is empty"));
    }
    let records = doc
        .scenarios
        .iter()
        .enumerate()
        .map(|(i, rec)| {
            parse_record(rec, &doc.defaults, overrides).map_err(|(field, msg)| {
                CliError::schema(format!("scenario {}, field `{field}`: {msg}", i + 1))
            })
        })
        .collect::<Result<Vec<_>, _>>()?;
    let shape = |r: &ScenarioRecord| (r.scenario.k(), r.scenario.n_endpoints());
    if let Some(i) = records.iter().position(|r| shape(r) != shape(&records[0])) {
        return Err(CliError::schema(format!(
            "scenario {}: all scenarios in one file must share the number of groups and endpoints",
            i + 1
        )));
    }
    Ok(records)
}

type FieldError = (String, String);

fn field_err(field: &str, msg: impl Into<String>) -> FieldError {
    (field.to_string(), msg.into())
}

fn number(rec: &Map<String, Value>, key: &str) -> Result<f64, FieldError> {
    rec[key]
        .as_f64()
        .filter(|v| v.is_finite())
        .ok_or_else(|| field_err(key, "must be a finite number"))
}

fn count<T: TryFrom<u64>>(value: &Value, key: &str) -> Result<T, FieldError> {
    value
        .as_u64()
        .and_then(|v| T::try_from(v).ok())
        .ok_or_else(|| field_err(key, "must be a non-negative integer"))
}

/// Splits `m<letter><group>` and friends; `None` for anything else.
enum Key {
    Size(usize),
    Mean(char, usize),
    Sd(char),
    Rho,
    Alpha,
    Sims,
    Seed,
}

fn classify(key: &str) -> Option<Key> {
    let group = |s: &str| {
        s.parse::<usize>()
            .ok()
            .filter(|&g| g >= 1 && !s.starts_with('0'))
    };
    let mut chars = key.chars();
    match (chars.next()?, key) {
        (_, "rho") => Some(Key::Rho),
        (_, "alpha") => Some(Key::Alpha),
        (_, "sims") => Some(Key::Sims),
        (_, "seed") => Some(Key::Seed),
        ('n', _) => group(&key[1..]).map(Key::Size),
        ('m', _) => {
            let letter = chars.next().filter(char::is_ascii_lowercase)?;
            group(&key[2..]).map(|g| Key::Mean(letter, g))
        }
        ('s', _) if key.len() == 2 => chars.next().filter(char::is_ascii_lowercase).map(Key::Sd),
        _ => None,
    }
}

fn parse_record(
    rec: &Map<String, Value>,
    defaults: &Defaults,
    ov: Overrides,
) -> Result<ScenarioRecord, FieldError> {
    let mut k = 0;
    let mut letters: Vec<char> = Vec::new();
    let mut mean_letters: Vec<(char, &str)> = Vec::new();
    for key in rec.keys() {
        match classify(key) {
            None => return Err(field_err(key, "unknown field")),
            Some(Key::Size(g)) => k = k.max(g),
            Some(Key::Mean(c, g)) => {
                k = k.max(g);
                mean_letters.push((c, key));
            }
            Some(Key::Sd(c)) => letters.push(c),
            _ => {}
        }
    }
    letters.sort_unstable();
    if let Some((c, key)) = mean_letters.iter().find(|(c, _)| !letters.contains(c)) {
        return Err(field_err(
            key,
            format!("endpoint `{c}` has no standard deviation `s{c}`"),
        ));
    }
    if letters.is_empty() {
        return Err(field_err(
            "sa",
            "at least one endpoint standard deviation is required",
        ));
    }
    for (i, &c) in letters.iter().enumerate() {
        let expected = (b'a' + i as u8) as char;
        if c != expected {
            return Err(field_err(
                &format!("s{expected}"),
                "missing; endpoints must be lettered a, b, c, ... without gaps",
            ));
        }
    }
    let j = letters.len();
    if k < 2 {
        return Err(field_err("n2", "at least two groups are required"));
    }
    let mut group_sizes = Vec::with_capacity(k);
    for g in 1..=k {
        let key = format!("n{g}");
        let v = rec.get(&key).ok_or_else(|| field_err(&key, "missing"))?;
        group_sizes.push(count::<usize>(v, &key)?);
    }
    let mut means = DMatrix::zeros(k, j);
    for (e, &c) in letters.iter().enumerate() {
        for g in 1..=k {
            let key = format!("m{c}{g}");
            if !rec.contains_key(&key) {
                return Err(field_err(&key, "missing"));
            }
            means[(g - 1, e)] = number(rec, &key)?;
        }
    }
    let sds = letters
        .iter()
        .map(|c| {
            let key = format!("s{c}");
            let s = number(rec, &key)?;
            if s > 0.0 {
                Ok(s)
            } else {
                Err(field_err(&key, "must be positive"))
            }
        })
        .collect::<Result<Vec<_>, _>>()?;
    let (rho, corr) = parse_rho(rec.get("rho"), j)?;
    let alpha = match (ov.alpha, rec.get("alpha")) {
        (Some(a), _) => a,
        (None, Some(_)) => number(rec, "alpha")?,
        (None, None) => defaults.alpha.unwrap_or(DEFAULT_ALPHA),
    };
    if !(alpha > 0.0 && alpha < 1.0) {
        return Err(field_err("alpha", "must lie strictly between 0 and 1"));
    }
    let sims = match (ov.sims, rec.get("sims")) {
        (Some(s), _) => s,
        (None, Some(v)) => count(v, "sims")?,
        (None, None) => defaults.sims.unwrap_or(DEFAULT_SIMS),
    };
    if sims == 0 {
        return Err(field_err("sims", "must be at least 1"));
    }
    let seed = match (ov.seed, rec.get("seed")) {
        (Some(s), _) => s,
        (None, Some(v)) => count(v, "seed")?,
        (None, None) => defaults.seed.unwrap_or(DEFAULT_SEED),
    };
    if let Some(g) = group_sizes.iter().position(|&n| n < 2) {
        return Err(field_err(
            &format!("n{}", g + 1),
            "each group needs at least 2 observations",
        ));
    }
    let scenario = Scenario::new(group_sizes, means, sds, corr, alpha, sims, seed)
        .map_err(|e| field_err("scenario", e.to_string()))?;
    Ok(ScenarioRecord { scenario, rho })
}

fn parse_rho(value: Option<&Value>, j: usize) -> Result<(RhoSpec, CorrelationMatrix), FieldError> {
    let bad = |msg: String| field_err("rho", msg);
    match value {
        None if j == 1 => Ok((RhoSpec::Common(0.0), CorrelationMatrix::identity(1))),
        None => Err(bad("missing; required with more than one endpoint".into())),
        Some(Value::Number(n)) => {
            let r = n.as_f64().unwrap_or(f64::NAN);
            if !(-1.0..=1.0).contains(&r) {
                return Err(bad(format!("must lie in [-1, 1], got {r}")));
            }
            let corr = CorrelationMatrix::equicorrelated(j, r).map_err(|e| bad(e.to_string()))?;
            Ok((RhoSpec::Common(r), corr))
        }
        Some(Value::Array(rows)) => {
            let rows: Vec<Vec<f64>> = rows
                .iter()
                .map(|row| {
                    row.as_array()
                        .and_then(|r| r.iter().map(Value::as_f64).collect::<Option<Vec<f64>>>())
                        .ok_or_else(|| bad("matrix rows must be arrays of numbers".into()))
                })
                .collect::<Result<_, _>>()?;
            if rows.len() != j {
                return Err(bad(format!(
                    "expected a {j} x {j} matrix, got {} rows",
                    rows.len()
                )));
            }
            let corr = CorrelationMatrix::from_rows(&rows).map_err(|e| bad(e.to_string()))?;
            Ok((RhoSpec::Matrix(rows), corr))
        }
        Some(_) => Err(bad("must be a number or a matrix".into())),
    }
}
