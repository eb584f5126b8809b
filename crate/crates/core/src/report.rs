//! Check results shared by the scheme, validation and catalog layers.

use serde::Serialize;
use std::fmt;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Status {
    Pass,
    Fail,
    /// Passed, but some comparison relied on a tolerance.
    NumericPass,
    /// Necessary conditions hold; no witness settles sufficiency.
    NecessaryConditionsPass,
}

impl Status {
    pub fn ok(self) -> bool {
        self != Status::Fail
    }
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Status::Pass => "pass",
            Status::Fail => "fail",
            Status::NumericPass => "numeric-pass",
            Status::NecessaryConditionsPass => "necessary-conditions-pass",
        };
        f.write_str(s)
    }
}

#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct CheckReport {
    pub witnesses: Vec<String>,
    pub notes: Vec<String>,
    /// Set when a tolerance comparison was involved.
    #[serde(skip)]
    pub numeric: bool,
    #[serde(skip)]
    pub necessary_only: bool,
}

impl CheckReport {
    pub fn new() -> Self {
        CheckReport::default()
    }
    pub fn fail(&mut self, w: impl Into<String>) {
        self.witnesses.push(w.into());
    }
    pub fn note(&mut self, n: impl Into<String>) {
        self.notes.push(n.into());
    }
    pub fn passed(&self) -> bool {
        self.witnesses.is_empty()
    }
    pub fn merge(&mut self, other: CheckReport) {
        self.witnesses.extend(other.witnesses);
        self.notes.extend(other.notes);
        self.numeric |= other.numeric;
        self.necessary_only |= other.necessary_only;
    }
    pub fn status(&self) -> Status {
        if !self.witnesses.is_empty() {
            Status::Fail
        } else if self.necessary_only {
            Status::NecessaryConditionsPass
        } else if self.numeric {
            Status::NumericPass
        } else {
            Status::Pass
        }
    }
}
