//! Verdicts and reports shared by the constructions.

use num_bigint::BigUint;
use serde::{Deserialize, Serialize};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Verdict {
    pub condition: String,
    pub passed: bool,
    pub detail: String,
}

impl Verdict {
    pub fn new(condition: impl Into<String>, passed: bool, detail: impl Into<String>) -> Self {
        Verdict {
            condition: condition.into(),
            passed,
            detail: detail.into(),
        }
    }
}

/// Outcome of checking a GPR-graph against the extension criterion.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExtensionReport {
    pub verdicts: Vec<Verdict>,
    /// Orders of `σ_1, …, σ_n`.
    pub schlafli: Vec<u64>,
    /// `|⟨σ_1, …, σ_n⟩|` as a decimal string.
    pub group_order: String,
}

impl ExtensionReport {
    pub fn passed(&self) -> bool {
        self.verdicts.iter().all(|v| v.passed)
    }

    pub fn verdict(&self, condition: &str) -> Option<&Verdict> {
        self.verdicts.iter().find(|v| v.condition == condition)
    }

    pub fn failures(&self) -> Vec<&Verdict> {
        self.verdicts.iter().filter(|v| !v.passed).collect()
    }

    pub fn last_entry(&self) -> Option<u64> {
        self.schlafli.last().copied()
    }

    pub fn group_order_big(&self) -> Option<BigUint> {
        self.group_order.parse().ok()
    }
}

/// A stage report as written by the command-line tool.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub construction: String,
    pub parameters: serde_json::Map<String, serde_json::Value>,
    /// True iff every verdict passed.
    pub passed: bool,
    pub verdicts: Vec<Verdict>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub schlafli: Vec<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub group_order: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub last_entry: Option<u64>,
    #[serde(default, skip_serializing_if = "serde_json::Map::is_empty")]
    pub details: serde_json::Map<String, serde_json::Value>,
    pub elapsed_ms: f64,
}

impl Report {
    pub fn new(construction: impl Into<String>) -> Self {
        Report {
            construction: construction.into(),
            parameters: Default::default(),
            passed: true,
            verdicts: Vec::new(),
            schlafli: Vec::new(),
            group_order: None,
            last_entry: None,
            details: Default::default(),
            elapsed_ms: 0.0,
        }
    }

    pub fn param(mut self, key: &str, value: impl Serialize) -> Self {
        self.parameters.insert(key.into(), to_value(value));
        self
    }

    pub fn detail(mut self, key: &str, value: impl Serialize) -> Self {
        self.details.insert(key.into(), to_value(value));
        self
    }

    pub fn verdict(mut self, v: Verdict) -> Self {
        self.passed &= v.passed;
        self.verdicts.push(v);
        self
    }

    pub fn extension(mut self, e: &ExtensionReport) -> Self {
        for v in &e.verdicts {
            self = self.verdict(v.clone());
        }
        self.schlafli = e.schlafli.clone();
        self.group_order = Some(e.group_order.clone());
        self.last_entry = e.last_entry();
        self
    }

    pub fn elapsed(mut self, d: std::time::Duration) -> Self {
        self.elapsed_ms = d.as_secs_f64() * 1000.0;
        self
    }
}

fn to_value(v: impl Serialize) -> serde_json::Value {
    serde_json::to_value(v).unwrap_or(serde_json::Value::Null)
}
