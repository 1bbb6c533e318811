//! Result document. JSON is canonical; CSV is a flat `field,value` projection.

use serde::{Deserialize, Serialize};
use serde_json::Value;
use voi_core::{TraceRow, VoiEstimate};

use crate::error::CliError;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ResultDocument {
    pub problem: String,
    /// Parameters after overrides, or the tabular problem itself.
    pub parameters: Value,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub load_profile: Option<String>,
    pub mc: VoiEstimate,
    /// Exact enumeration, for tabular problems.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub exact: Option<VoiEstimate>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub trace: Option<Vec<TraceRow>>,
    pub wall_clock_seconds: f64,
}

impl ResultDocument {
    pub fn to_json(&self) -> Result<String, CliError> {
        let mut s = serde_json::to_string_pretty(self).map_err(|e| CliError::config(e.to_string()))?;
        s.push('\n');
        Ok(s)
    }

    pub fn to_csv(&self) -> Result<String, CliError> {
        let value = serde_json::to_value(self).map_err(|e| CliError::config(e.to_string()))?;
        let mut rows = Vec::new();
        flatten("", &value, &mut rows);
        let mut w = csv::Writer::from_writer(Vec::new());
        let io = |e: csv::Error| CliError::config(e.to_string());
        w.write_record(["field", "value"]).map_err(io)?;
        for (k, v) in rows {
            w.write_record([k, v]).map_err(io)?;
        }
        String::from_utf8(w.into_inner().map_err(|e| CliError::config(e.to_string()))?)
            .map_err(|e| CliError::config(e.to_string()))
    }
}

fn flatten(prefix: &str, value: &Value, out: &mut Vec<(String, String)>) {
    let join = |k: &str| if prefix.is_empty() { k.to_string() } else { format!("{prefix}.{k}") };
    match value {
        Value::Object(map) => map.iter().for_each(|(k, v)| flatten(&join(k), v, out)),
        Value::Array(items) => items.iter().enumerate().for_each(|(i, v)| flatten(&join(&i.to_string()), v, out)),
        Value::String(s) => out.push((prefix.to_string(), s.clone())),
        Value::Null => out.push((prefix.to_string(), String::new())),
        other => out.push((prefix.to_string(), other.to_string())),
    }
}

pub fn trace_csv(rows: &[TraceRow]) -> Result<String, CliError> {
    let mut w = csv::Writer::from_writer(Vec::new());
    let io = |e: csv::Error| CliError::config(e.to_string());
    w.write_record(["n", "prior_value", "evpi"]).map_err(io)?;
    for r in rows {
        w.write_record([r.n.to_string(), r.prior_value.to_string(), r.evpi.to_string()]).map_err(io)?;
    }
    String::from_utf8(w.into_inner().map_err(|e| CliError::config(e.to_string()))?)
        .map_err(|e| CliError::config(e.to_string()))
}
