use std::fmt;

use serde::Serialize;

/// One failing object in a check suite.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CheckFailure {
    pub subject: String,
    pub detail: String,
}

/// Outcome of a check suite: how many objects were examined and which of
/// them failed.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CheckReport {
    pub suite: String,
    pub checked: usize,
    pub failures: Vec<CheckFailure>,
}

impl CheckReport {
    pub fn new(suite: impl Into<String>) -> Self {
        CheckReport { suite: suite.into(), checked: 0, failures: Vec::new() }
    }

    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }

    pub fn fail(&mut self, subject: impl Into<String>, detail: impl Into<String>) {
        self.failures.push(CheckFailure { subject: subject.into(), detail: detail.into() });
    }

    /// Records one checked object, failing it when `detail` is present.
    pub fn record(&mut self, subject: impl Into<String>, detail: Option<String>) {
        self.checked += 1;
        if let Some(detail) = detail {
            self.fail(subject, detail);
        }
    }

    pub fn merge(&mut self, other: CheckReport) {
        self.checked += other.checked;
        self.failures.extend(other.failures);
    }
}

impl fmt::Display for CheckReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let verdict = if self.passed() { "pass" } else { "FAIL" };
        write!(f, "{}: {} ({} checked, {} failed)", self.suite, verdict, self.checked, self.failures.len())?;
        for failure in &self.failures {
            write!(f, "\n  {}: {}", failure.subject, failure.detail)?;
        }
        Ok(())
    }
}
