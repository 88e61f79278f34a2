//! Structured pass/fail outcomes with counterexample witnesses.

use serde::Serialize;

use crate::kernel::NumericMode;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Outcome {
    Pass,
    Fail,
    /// A sign could not be certified at the requested precision.
    Indeterminate,
}

/// A failing (or unresolved) point, with enough coordinates to reproduce it.
#[derive(Debug, Clone, Serialize)]
pub struct Witness {
    /// Ordered coordinates, e.g. `[("l", "99"), ("j", "5")]`.
    pub params: Vec<(String, String)>,
    pub detail: String,
}

impl Witness {
    pub fn new(params: &[(&str, String)], detail: impl Into<String>) -> Self {
        Witness {
            params: params
                .iter()
                .map(|(k, v)| (k.to_string(), v.clone()))
                .collect(),
            detail: detail.into(),
        }
    }
}

/// One named assertion inside a verification run.
#[derive(Debug, Clone, Serialize)]
pub struct CheckItem {
    pub name: String,
    pub outcome: Outcome,
    pub witnesses: Vec<Witness>,
}

impl CheckItem {
    pub fn pass(name: impl Into<String>) -> Self {
        CheckItem {
            name: name.into(),
            outcome: Outcome::Pass,
            witnesses: Vec::new(),
        }
    }

    pub fn fail(name: impl Into<String>, witnesses: Vec<Witness>) -> Self {
        CheckItem {
            name: name.into(),
            outcome: Outcome::Fail,
            witnesses,
        }
    }

    pub fn indeterminate(name: impl Into<String>, witnesses: Vec<Witness>) -> Self {
        CheckItem {
            name: name.into(),
            outcome: Outcome::Indeterminate,
            witnesses,
        }
    }

    pub fn of(name: impl Into<String>, ok: bool, witnesses: Vec<Witness>) -> Self {
        if ok {
            CheckItem::pass(name)
        } else {
            CheckItem::fail(name, witnesses)
        }
    }
}

/// Aggregate result of one verification suite.
#[derive(Debug, Clone, Serialize)]
pub struct VerificationReport {
    pub check: String,
    pub mode: String,
    pub items: Vec<CheckItem>,
}

impl VerificationReport {
    pub fn new(check: impl Into<String>, mode: NumericMode) -> Self {
        VerificationReport {
            check: check.into(),
            mode: mode.describe(),
            items: Vec::new(),
        }
    }

    pub fn push(&mut self, item: CheckItem) {
        self.items.push(item);
    }

    pub fn passed(&self) -> bool {
        self.items.iter().all(|i| i.outcome == Outcome::Pass)
    }

    pub fn indeterminate(&self) -> bool {
        self.items.iter().any(|i| i.outcome == Outcome::Indeterminate)
    }

    pub fn failures(&self) -> impl Iterator<Item = &CheckItem> {
        self.items.iter().filter(|i| i.outcome == Outcome::Fail)
    }

    /// Merges another report's items under this report's heading.
    pub fn absorb(&mut self, other: VerificationReport) {
        self.items.extend(other.items);
    }
}
