//! Pass/fail bookkeeping for the verification suites.

use serde::{Deserialize, Serialize};

/// Outcome of a batch of checks: how many ran and which ones failed.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Report {
    pub name: String,
    pub checks: usize,
    pub failures: Vec<String>,
}

impl Report {
    pub fn new(name: impl Into<String>) -> Self {
        Report {
            name: name.into(),
            ..Report::default()
        }
    }

    /// Records one check; the message is only built on failure.
    pub fn check(&mut self, ok: bool, msg: impl FnOnce() -> String) -> bool {
        self.checks += 1;
        if !ok {
            self.failures.push(msg());
        }
        ok
    }

    /// Records a fallible step as a failed check when it errors.
    pub fn attempt<T>(&mut self, what: &str, r: crate::Result<T>) -> Option<T> {
        match r {
            Ok(v) => Some(v),
            Err(e) => {
                self.checks += 1;
                self.failures.push(format!("{what}: {e}"));
                None
            }
        }
    }

    pub fn merge(&mut self, other: Report) {
        self.checks += other.checks;
        self.failures
            .extend(other.failures.into_iter().map(|f| format!("{}: {f}", other.name)));
    }

    pub fn passed(&self) -> bool {
        self.failures.is_empty() && self.checks > 0
    }

    pub fn summary(&self) -> String {
        format!(
            "{}: {} ({} checks, {} failures)",
            self.name,
            if self.passed() { "PASS" } else { "FAIL" },
            self.checks,
            self.failures.len()
        )
    }
}
