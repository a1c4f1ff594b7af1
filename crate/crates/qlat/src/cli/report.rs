//! Machine-readable run reports.
//!
//! Every numeric value is an exact decimal string; no floating-point
//! token ever appears in a report. Identical runs of the same binary
//! serialize byte-identically, so reports can be diffed and re-checked.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::verify::Witness;

pub const REPORT_VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct ResultRecord {
    pub name: String,
    pub value: String,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct FailureRecord {
    pub kind: String,
    pub detail: String,
    /// Offending subspaces, one entry per tuple member, rows joined by
    /// spaces (e.g. `"100100 010000"`).
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub witness: Vec<String>,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct Report {
    pub command: String,
    pub params: BTreeMap<String, String>,
    pub results: Vec<ResultRecord>,
    pub failures: Vec<FailureRecord>,
    pub sampled: bool,
    pub version: String,
    /// Full per-row CSV body for commands that have one (audit, search
    /// leaderboards); rendered by `--format csv`, never serialized.
    #[serde(skip)]
    pub csv_blob: Option<String>,
}

impl Report {
    pub fn new(command: impl Into<String>, params: BTreeMap<String, String>) -> Report {
        Report {
            command: command.into(),
            params,
            results: Vec::new(),
            failures: Vec::new(),
            sampled: false,
            version: REPORT_VERSION.to_string(),
            csv_blob: None,
        }
    }

    pub fn push_result(&mut self, name: impl Into<String>, value: impl ToString) {
        self.results.push(ResultRecord { name: name.into(), value: value.to_string() });
    }

    pub fn push_failure(&mut self, kind: impl Into<String>, detail: impl Into<String>) {
        self.failures.push(FailureRecord { kind: kind.into(), detail: detail.into(), witness: Vec::new() });
    }

    pub fn push_witness_failure(
        &mut self,
        kind: impl Into<String>,
        detail: impl Into<String>,
        witness: &Witness,
    ) {
        let rows: Vec<String> = witness.members.iter().map(|s| s.digit_rows().join(" ")).collect();
        self.failures.push(FailureRecord { kind: kind.into(), detail: detail.into(), witness: rows });
    }

    pub fn ok(&self) -> bool {
        self.failures.is_empty()
    }

    pub fn to_json(&self) -> String {
        let mut out = serde_json::to_string_pretty(self).expect("report serializes");
        out.push('\n');
        out
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        out.push_str(&format!("command: {}\n", self.command));
        for (k, v) in &self.params {
            out.push_str(&format!("  param {k} = {v}\n"));
        }
        for r in &self.results {
            out.push_str(&format!("{} = {}\n", r.name, r.value));
        }
        for f in &self.failures {
            out.push_str(&format!("FAILURE [{}] {}\n", f.kind, f.detail));
            for w in &f.witness {
                out.push_str(&format!("  witness: {w}\n"));
            }
        }
        if self.sampled {
            out.push_str("sampled: true (not a proof)\n");
        }
        out.push_str(if self.ok() { "status: ok\n" } else { "status: failed\n" });
        out
    }

    /// Plain `name,value` CSV of the results section.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("name,value\n");
        for r in &self.results {
            out.push_str(&format!("{},{}\n", r.name, r.value));
        }
        out
    }
}
