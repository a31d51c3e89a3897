//! Scenario ingestion from CSV files and JSON arrays.
//!
//! CSV layout: a header row names the columns, one column per asset's
//! scenario payoffs. An optional column named `weight` carries scenario
//! probabilities; without it atoms are equiprobable. Encoding is UTF-8 with
//! `.` as the decimal separator, and row order is preserved.

use crate::error::{Error, Result};
use crate::scenario::EmpiricalDistribution;
use serde_json::Value;
use std::path::Path;

const WEIGHT_COLUMN: &str = "weight";

/// One parsed scenario table: named payoff columns plus optional weights.
#[derive(Debug, Clone)]
pub struct ScenarioTable {
    columns: Vec<(String, Vec<f64>)>,
    weights: Option<Vec<f64>>,
}

impl ScenarioTable {
    pub fn column_names(&self) -> Vec<&str> {
        self.columns.iter().map(|(n, _)| n.as_str()).collect()
    }

    pub fn rows(&self) -> usize {
        self.columns.first().map_or(0, |(_, v)| v.len())
    }

    fn weights_or_equiprobable(&self) -> Vec<f64> {
        match &self.weights {
            Some(w) => w.clone(),
            None => vec![1.0 / self.rows() as f64; self.rows()],
        }
    }

    /// Build a distribution from the named column, or the first payoff
    /// column when `column` is `None`.
    pub fn distribution(&self, column: Option<&str>) -> Result<EmpiricalDistribution> {
        let (name, values) = match column {
            Some(c) => self
                .columns
                .iter()
                .find(|(n, _)| n == c)
                .ok_or_else(|| Error::Scenario(format!("no column named '{c}'")))?,
            None => self
                .columns
                .first()
                .ok_or_else(|| Error::Scenario("no payoff columns".into()))?,
        };
        EmpiricalDistribution::new(values.clone(), self.weights_or_equiprobable())
            .map_err(|e| Error::Scenario(format!("column '{name}': {e}")))
    }

    /// All payoff columns as distributions on the shared atoms.
    pub fn distributions(&self) -> Result<Vec<(String, EmpiricalDistribution)>> {
        self.columns
            .iter()
            .map(|(n, _)| Ok((n.clone(), self.distribution(Some(n))?)))
            .collect()
    }
}

pub fn table_from_csv_str(text: &str) -> Result<ScenarioTable> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(true)
        .trim(csv::Trim::All)
        .from_reader(text.as_bytes());
    let headers: Vec<String> = reader
        .headers()?
        .iter()
        .map(|h| h.to_string())
        .collect();
    if headers.is_empty() {
        return Err(Error::Scenario("csv has no columns".into()));
    }
    let mut data: Vec<Vec<f64>> = vec![Vec::new(); headers.len()];
    for (row_idx, record) in reader.records().enumerate() {
        let record = record?;
        if record.len() != headers.len() {
            return Err(Error::Scenario(format!(
                "row {} has {} fields, expected {}",
                row_idx + 1,
                record.len(),
                headers.len()
            )));
        }
        for (col, field) in record.iter().enumerate() {
            let v: f64 = field.parse().map_err(|_| {
                Error::Scenario(format!(
                    "row {}, column '{}': cannot parse '{}' as a number",
                    row_idx + 1,
                    headers[col],
                    field
                ))
            })?;
            data[col].push(v);
        }
    }
    let mut columns = Vec::new();
    let mut weights = None;
    for (name, values) in headers.into_iter().zip(data) {
        if name == WEIGHT_COLUMN {
            weights = Some(values);
        } else {
            columns.push((name, values));
        }
    }
    if columns.is_empty() {
        return Err(Error::Scenario("csv has only a weight column".into()));
    }
    Ok(ScenarioTable { columns, weights })
}

pub fn table_from_csv_path(path: impl AsRef<Path>) -> Result<ScenarioTable> {
    let text = std::fs::read_to_string(path)?;
    table_from_csv_str(&text)
}

/// JSON scenarios: either a plain array of payoffs (equiprobable) or an
/// object `{"outcomes": [...], "weights": [...]}` with weights optional.
/// Unknown keys are rejected.
pub fn distribution_from_json_str(text: &str) -> Result<EmpiricalDistribution> {
    let value: Value = serde_json::from_str(text)?;
    distribution_from_json(&value)
}

pub fn distribution_from_json(value: &Value) -> Result<EmpiricalDistribution> {
    match value {
        Value::Array(_) => {
            let outcomes = number_vec(value, "$")?;
            EmpiricalDistribution::equiprobable(outcomes)
        }
        Value::Object(map) => {
            for key in map.keys() {
                if key != "outcomes" && key != "weights" {
                    return Err(Error::parse(format!("$.{key}"), "unknown key in scenario object"));
                }
            }
            let outcomes = map
                .get("outcomes")
                .ok_or_else(|| Error::parse("$", "scenario object is missing 'outcomes'"))?;
            let outcomes = number_vec(outcomes, "$.outcomes")?;
            match map.get("weights") {
                Some(w) => {
                    let weights = number_vec(w, "$.weights")?;
                    EmpiricalDistribution::new(outcomes, weights)
                }
                None => EmpiricalDistribution::equiprobable(outcomes),
            }
        }
        _ => Err(Error::parse(
            "$",
            "scenario JSON must be an array of payoffs or an object with 'outcomes'",
        )),
    }
}

fn number_vec(value: &Value, path: &str) -> Result<Vec<f64>> {
    let arr = value
        .as_array()
        .ok_or_else(|| Error::parse(path, "expected an array of numbers"))?;
    arr.iter()
        .enumerate()
        .map(|(i, v)| {
            v.as_f64()
                .ok_or_else(|| Error::parse(format!("{path}[{i}]"), "expected a number"))
        })
        .collect()
}

/// Scenario source for command-line runs: a `.json`/`.csv` path or an
/// inline JSON document.
pub fn distribution_from_path(path: impl AsRef<Path>, column: Option<&str>) -> Result<EmpiricalDistribution> {
    let path = path.as_ref();
    let is_json = path
        .extension()
        .is_some_and(|e| e.eq_ignore_ascii_case("json"));
    if is_json {
        let text = std::fs::read_to_string(path)?;
        distribution_from_json_str(&text)
    } else {
        table_from_csv_path(path)?.distribution(column)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn csv_single_column_equiprobable() {
        let t = table_from_csv_str("pnl\n1.5\n-2.0\n0.5\n").unwrap();
        let d = t.distribution(None).unwrap();
        assert_eq!(d.outcomes(), &[1.5, -2.0, 0.5]);
        assert!((d.weights()[0] - 1.0 / 3.0).abs() < 1e-15);
    }

    #[test]
    fn csv_with_weight_column_preserves_row_order() {
        let t = table_from_csv_str("a,weight,b\n10.0,0.1,1.0\n0.0,0.9,2.0\n").unwrap();
        assert_eq!(t.column_names(), vec!["a", "b"]);
        let a = t.distribution(Some("a")).unwrap();
        assert_eq!(a.outcomes(), &[10.0, 0.0]);
        assert_eq!(a.weights(), &[0.1, 0.9]);
        let b = t.distribution(Some("b")).unwrap();
        assert_eq!(b.outcomes(), &[1.0, 2.0]);
        assert!(t.distribution(Some("missing")).is_err());
    }

    #[test]
    fn csv_errors_name_the_cell() {
        let err = table_from_csv_str("a\n1.0\nxyz\n").unwrap_err();
        let msg = err.to_string();
        assert!(msg.contains("row 2") && msg.contains("xyz"), "{msg}");
    }

    #[test]
    fn json_array_and_object_forms() {
        let d = distribution_from_json_str("[1.0, 2.0, 3.0]").unwrap();
        assert_eq!(d.len(), 3);

        let d = distribution_from_json_str(
            "{\"outcomes\": [10.0, 0.0], \"weights\": [0.1, 0.9]}",
        )
        .unwrap();
        assert_eq!(d.weights(), &[0.1, 0.9]);

        assert!(distribution_from_json_str("{\"outcomes\": [1.0], \"extra\": 1}").is_err());
        assert!(distribution_from_json_str("3.5").is_err());
    }
}
