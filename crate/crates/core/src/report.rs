//! Deterministic, machine-readable check reports.

use std::collections::BTreeMap;

use serde::Serialize;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Error,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Finding {
    pub code: String,
    pub message: String,
    pub location: String,
}

/// Findings are kept in the order they were produced; callers iterate
/// corpora in degree-lexicographic order so the first finding is stable.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Report {
    pub check: String,
    pub status: Status,
    pub findings: Vec<Finding>,
    pub fingerprint: BTreeMap<String, String>,
    pub info: BTreeMap<String, String>,
    pub notes: Vec<String>,
}

impl Report {
    pub fn new(check: impl Into<String>) -> Self {
        Report {
            check: check.into(),
            status: Status::Pass,
            findings: Vec::new(),
            fingerprint: BTreeMap::new(),
            info: BTreeMap::new(),
            notes: Vec::new(),
        }
    }

    pub fn push(&mut self, code: &str, message: impl Into<String>, location: impl Into<String>) {
        self.findings.push(Finding {
            code: code.to_owned(),
            message: message.into(),
            location: location.into(),
        });
        if self.status == Status::Pass {
            self.status = Status::Fail;
        }
    }

    /// Records an evaluation error; the report can no longer pass.
    pub fn push_error(
        &mut self,
        code: &str,
        message: impl Into<String>,
        location: impl Into<String>,
    ) {
        self.push(code, message, location);
        self.status = Status::Error;
    }

    pub fn fingerprint(mut self, key: &str, value: impl ToString) -> Self {
        self.fingerprint.insert(key.to_owned(), value.to_string());
        self
    }

    pub fn set_info(&mut self, key: &str, value: impl ToString) {
        self.info.insert(key.to_owned(), value.to_string());
    }

    pub fn note(&mut self, text: impl Into<String>) {
        self.notes.push(text.into());
    }

    /// Appends another report's findings, keeping the worse status.
    pub fn absorb(&mut self, other: Report) {
        self.findings.extend(other.findings);
        self.status = match (self.status, other.status) {
            (Status::Error, _) | (_, Status::Error) => Status::Error,
            (Status::Fail, _) | (_, Status::Fail) => Status::Fail,
            _ => Status::Pass,
        };
    }

    pub fn is_pass(&self) -> bool {
        self.status == Status::Pass
    }

    pub fn has_code(&self, code: &str) -> bool {
        self.findings.iter().any(|f| f.code == code)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}
