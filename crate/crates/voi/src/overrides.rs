//! `--set key=value` overrides applied through the parameters' JSON form.

use serde::de::DeserializeOwned;
use serde::Serialize;
use serde_json::Value;

use crate::error::CliError;

/// Apply `key=value` assignments to `params`. Keys are dotted paths into the
/// serialized parameters; values are JSON, or bare strings when not valid JSON.
pub fn apply<T>(params: &T, assignments: &[String]) -> Result<T, CliError>
where
    T: Serialize + DeserializeOwned,
{
    let mut doc = serde_json::to_value(params).map_err(|e| CliError::config(e.to_string()))?;
    for assignment in assignments {
        let (key, raw) = assignment
            .split_once('=')
            .ok_or_else(|| CliError::config(format!("override `{assignment}` is not of the form key=value")))?;
        let key = key.trim();
        let slot = lookup(&mut doc, key)?;
        let value = serde_json::from_str(raw.trim()).unwrap_or_else(|_| Value::String(raw.trim().to_string()));
        *slot = value;
        // Re-validate per key so a type error names the key that caused it.
        serde_json::from_value::<T>(doc.clone())
            .map_err(|e| CliError::config(format!("invalid value for `{key}`: {e}")))?;
    }
    serde_json::from_value(doc).map_err(|e| CliError::config(e.to_string()))
}

fn lookup<'a>(doc: &'a mut Value, key: &str) -> Result<&'a mut Value, CliError> {
    let unknown = || CliError::config(format!("unknown parameter `{key}`"));
    let mut node = doc;
    for part in key.split('.') {
        node = match node {
            Value::Object(map) => map.get_mut(part).ok_or_else(unknown)?,
            _ => return Err(unknown()),
        };
    }
    Ok(node)
}
