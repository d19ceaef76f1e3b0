//! Scenario checking for the `validate` subcommand.

use std::fmt;

use crate::scenario::{parse_scenario, ScenarioError, ScenarioMap};

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct ValidationReport {
    pub errors: Vec<String>,
    pub warnings: Vec<String>,
}

impl ValidationReport {
    pub fn is_ok(&self) -> bool {
        self.errors.is_empty()
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for e in &self.errors {
            writeln!(f, "error: {e}")?;
        }
        for w in &self.warnings {
            writeln!(f, "warning: {w}")?;
        }
        if self.is_ok() {
            writeln!(f, "OK")?;
        }
        Ok(())
    }
}

/// Parses `text`, collects every rule violation, and warns when the target
/// cannot be reached at all.
pub fn validate_scenario(text: &str) -> (ValidationReport, Option<ScenarioMap>) {
    let mut report = ValidationReport::default();
    match parse_scenario(text) {
        Ok(map) => {
            if !map.target_reachable() {
                report.warnings.push(
                    "target is not reachable from the unit; solvers will find nothing".into(),
                );
            }
            (report, Some(map))
        }
        Err(ScenarioError::Invalid(vs)) => {
            report.errors.extend(vs.iter().map(|v| v.to_string()));
            (report, None)
        }
        Err(e) => {
            report.errors.push(e.to_string());
            (report, None)
        }
    }
}
