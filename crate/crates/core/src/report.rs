//! Deterministic verification reports.
//!
//! A report is a flat list of named checks with pass/fail/skip status and an
//! optional witness string (exact rationals, so any failure is independently
//! re-checkable). Serialization is byte-deterministic for a fixed command
//! line and seed: the `runtime_ms` field is pinned to zero in reports and
//! wall-clock timing is printed to stderr instead.

use serde::{Deserialize, Serialize};

#[derive(Serialize, Deserialize, Clone, Copy, PartialEq, Eq, Debug)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Skip,
}

#[derive(Serialize, Deserialize, Clone, Debug, PartialEq, Eq)]
pub struct CheckRecord {
    pub name: String,
    pub status: Status,
    pub witness: Option<String>,
}

#[derive(Serialize, Deserialize, Clone, Debug, PartialEq, Eq)]
pub struct SuiteReport {
    pub suite: String,
    pub seed: u64,
    pub checks: Vec<CheckRecord>,
    pub runtime_ms: u64,
}

impl SuiteReport {
    pub fn new(suite: impl Into<String>, seed: u64) -> SuiteReport {
        SuiteReport { suite: suite.into(), seed, checks: Vec::new(), runtime_ms: 0 }
    }

    pub fn pass(&mut self, name: impl Into<String>) {
        self.checks.push(CheckRecord { name: name.into(), status: Status::Pass, witness: None });
    }

    pub fn pass_with(&mut self, name: impl Into<String>, witness: impl Into<String>) {
        self.checks.push(CheckRecord {
            name: name.into(),
            status: Status::Pass,
            witness: Some(witness.into()),
        });
    }

    pub fn fail(&mut self, name: impl Into<String>, witness: impl Into<String>) {
        self.checks.push(CheckRecord {
            name: name.into(),
            status: Status::Fail,
            witness: Some(witness.into()),
        });
    }

    pub fn skip(&mut self, name: impl Into<String>, note: impl Into<String>) {
        self.checks.push(CheckRecord {
            name: name.into(),
            status: Status::Skip,
            witness: Some(note.into()),
        });
    }

    /// Pass with no witness, or fail carrying one.
    pub fn record(&mut self, name: impl Into<String>, ok: bool, witness: impl Into<String>) {
        if ok {
            self.pass(name);
        } else {
            self.fail(name, witness);
        }
    }

    /// A report with any fail record has overall status fail.
    pub fn overall_pass(&self) -> bool {
        self.checks.iter().all(|c| c.status != Status::Fail)
    }
}

pub fn to_json(reports: &[SuiteReport]) -> String {
    let mut s = if reports.len() == 1 {
        serde_json::to_string_pretty(&reports[0]).expect("report serialization")
    } else {
        serde_json::to_string_pretty(reports).expect("report serialization")
    };
    s.push('\n');
    s
}

/// Markdown mirror of the JSON content, one table per suite.
pub fn to_markdown(reports: &[SuiteReport]) -> String {
    let mut out = String::new();
    for r in reports {
        out.push_str(&format!("## {} (seed {})\n\n", r.suite, r.seed));
        out.push_str("| check | status | witness |\n");
        out.push_str("|---|---|---|\n");
        for c in &r.checks {
            let status = match c.status {
                Status::Pass => "pass",
                Status::Fail => "fail",
                Status::Skip => "skip",
            };
            let witness = c.witness.as_deref().unwrap_or("");
            out.push_str(&format!("| {} | {} | {} |\n", c.name, status, witness.replace('|', "\\|")));
        }
        let overall = if r.overall_pass() { "pass" } else { "fail" };
        out.push_str(&format!("\noverall: **{overall}**\n\n"));
    }
    out
}
