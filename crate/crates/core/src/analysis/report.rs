//! Structured results of verification experiments.

use std::collections::BTreeMap;
use std::io::Write;

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::error::{Error, Result};

/// One experiment outcome: a named statistic with its parameters, an
/// optional pass threshold, and per-sample detail records.
///
/// Multi-part experiments normalize every sub-check by its own tolerance
/// and report the worst normalized score as the statistic with threshold
/// 1.0, so that the invariant "passed iff statistic <= threshold" carries
/// the whole bundle. Raw quantities live in `details`.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct ExperimentReport {
    pub name: String,
    pub parameters: BTreeMap<String, Value>,
    pub samples: usize,
    pub statistic: f64,
    pub threshold: Option<f64>,
    pub passed: bool,
    pub seed: u64,
    pub details: Vec<BTreeMap<String, Value>>,
}

impl ExperimentReport {
    pub fn new(name: impl Into<String>, seed: u64) -> Self {
        ExperimentReport {
            name: name.into(),
            parameters: BTreeMap::new(),
            samples: 0,
            statistic: f64::NAN,
            threshold: None,
            passed: false,
            seed,
            details: Vec::new(),
        }
    }

    pub fn set_parameter(&mut self, key: &str, value: impl Into<Value>) {
        self.parameters.insert(key.to_string(), value.into());
    }

    pub fn push_detail(&mut self, row: BTreeMap<String, Value>) {
        self.details.push(row);
    }

    /// Install the statistic and threshold together; `passed` follows the
    /// invariant (NaN statistics never pass).
    pub fn finalize(&mut self, statistic: f64, threshold: Option<f64>) {
        self.statistic = statistic;
        self.threshold = threshold;
        self.passed = match threshold {
            Some(thr) => statistic <= thr,
            None => statistic.is_finite(),
        };
    }

    pub fn to_json(&self) -> Result<String> {
        serde_json::to_string_pretty(self)
            .map_err(|e| Error::Experiment(format!("report serialization failed: {e}")))
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text)
            .map_err(|e| Error::Experiment(format!("report deserialization failed: {e}")))
    }

    /// Flatten the detail records to CSV: columns are the sorted union of
    /// keys, rows print missing entries as empty cells.
    pub fn details_to_csv(&self, out: &mut dyn Write) -> Result<()> {
        let mut columns: Vec<String> = Vec::new();
        for row in &self.details {
            for key in row.keys() {
                if !columns.contains(key) {
                    columns.push(key.clone());
                }
            }
        }
        columns.sort();
        let mut io = || -> std::io::Result<()> {
            writeln!(out, "{}", columns.join(","))?;
            for row in &self.details {
                let cells: Vec<String> = columns
                    .iter()
                    .map(|c| match row.get(c) {
                        Some(Value::String(s)) => s.clone(),
                        Some(v) => v.to_string(),
                        None => String::new(),
                    })
                    .collect();
                writeln!(out, "{}", cells.join(","))?;
            }
            Ok(())
        };
        io().map_err(|e| Error::Experiment(format!("csv write failed: {e}")))
    }
}

/// Helper for building detail rows tersely.
pub fn detail_row(pairs: &[(&str, Value)]) -> BTreeMap<String, Value> {
    pairs
        .iter()
        .map(|(k, v)| (k.to_string(), v.clone()))
        .collect()
}

/// Shorthand for a float JSON value.
pub fn num(v: f64) -> Value {
    serde_json::Number::from_f64(v)
        .map(Value::Number)
        .unwrap_or(Value::Null)
}
