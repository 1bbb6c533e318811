//! Tabular problem files.
//!
//! ```json
//! {"sense": "maximize", "actions": ["a", "b"], "states": ["s1", "s2"],
//!  "probabilities": [0.5, 0.5], "utilities": [[1, 0], [0, 0.6]]}
//! ```

use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};
use voi_core::{Action, Sense, TabularProblem};

use crate::error::CliError;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TabularFile {
    pub sense: Sense,
    pub actions: Vec<String>,
    pub states: Vec<String>,
    pub probabilities: Vec<f64>,
    /// `[action][state]`
    pub utilities: Vec<Vec<f64>>,
}

impl TabularFile {
    pub fn build(&self) -> Result<TabularProblem, CliError> {
        let actions = self.actions.iter().map(|a| Action::new(a.clone(), a.clone())).collect();
        Ok(TabularProblem::new(
            actions,
            self.states.clone(),
            self.probabilities.clone(),
            self.utilities.clone(),
            self.sense,
        )?)
    }
}

pub fn parse_tabular_str(text: &str) -> Result<TabularFile, CliError> {
    serde_json::from_str(text).map_err(|e| CliError::config(format!("tabular problem: {e}")))
}

pub fn parse_tabular(path: &Path) -> Result<(TabularFile, TabularProblem), CliError> {
    let text =
        fs::read_to_string(path).map_err(|e| CliError::config(format!("cannot read {}: {e}", path.display())))?;
    let file = parse_tabular_str(&text)?;
    let problem = file.build()?;
    Ok((file, problem))
}
