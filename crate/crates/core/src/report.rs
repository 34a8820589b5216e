//! Machine-readable verification reports.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use serde_json::Value;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum Status {
    Pass,
    Fail,
    Skipped,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub status: Status,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<String>,
    #[serde(default, skip_serializing_if = "Value::is_null")]
    pub detail: Value,
}

impl Check {
    pub fn pass(name: impl Into<String>, detail: Value) -> Check {
        Check { name: name.into(), status: Status::Pass, witness: None, detail }
    }

    pub fn fail(name: impl Into<String>, witness: impl Into<String>, detail: Value) -> Check {
        Check { name: name.into(), status: Status::Fail, witness: Some(witness.into()), detail }
    }

    pub fn skipped(name: impl Into<String>, reason: impl Into<String>) -> Check {
        Check { name: name.into(), status: Status::Skipped, witness: None, detail: Value::String(reason.into()) }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub command: String,
    pub inputs: Value,
    pub checks: Vec<Check>,
    #[serde(default, skip_serializing_if = "Value::is_null")]
    pub result: Value,
    pub seed: u64,
    pub version: String,
    /// Wall-clock seconds per stage; only filled on request since it breaks
    /// byte-for-byte reproducibility.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub timings: Option<BTreeMap<String, f64>>,
}

impl Report {
    pub fn new(command: impl Into<String>, inputs: Value, seed: u64) -> Report {
        Report {
            command: command.into(),
            inputs,
            checks: Vec::new(),
            result: Value::Null,
            seed,
            version: env!("CARGO_PKG_VERSION").to_string(),
            timings: None,
        }
    }

    pub fn push(&mut self, check: Check) {
        self.checks.push(check);
    }

    pub fn all_pass(&self) -> bool {
        self.checks.iter().all(|c| c.status != Status::Fail)
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::json;

    #[test]
    fn fail_carries_witness_and_status_is_uppercase() {
        let mut r = Report::new("verify", json!({"p": 3}), 7);
        r.push(Check::pass("a", Value::Null));
        r.push(Check::fail("b", "x = (1, 0)", json!({"deviation": 0.5})));
        r.push(Check::skipped("c", "p = 2 only"));
        assert!(!r.all_pass());
        let text = r.to_json();
        assert!(text.contains("\"FAIL\"") && text.contains("\"SKIPPED\""));
        assert!(!text.contains("timings"));
        let back: Report = serde_json::from_str(&text).unwrap();
        assert_eq!(back.checks[1].witness.as_deref(), Some("x = (1, 0)"));
    }
}
