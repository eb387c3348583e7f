//! Verification reports with structured counterexamples.

use alloc::string::String;
use alloc::vec::Vec;

use crate::lattice::SphereFn;
use crate::rational::Rational;

/// Structured, serialization-agnostic counterexample payload.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Evidence {
    Function(SphereFn),
    /// Raw (not necessarily sphere) values, with the space's labels.
    Values(Vec<String>, Vec<Rational>),
    Number(Rational),
    Count(u64),
    Point(String),
    Text(String),
    List(Vec<Evidence>),
    Record(Vec<(String, Evidence)>),
}

impl Evidence {
    pub fn record<const N: usize>(fields: [(&str, Evidence); N]) -> Self {
        Evidence::Record(fields.into_iter().map(|(k, v)| (k.into(), v)).collect())
    }

    pub fn text(s: impl Into<String>) -> Self {
        Evidence::Text(s.into())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Status {
    Pass,
    Fail,
    Skipped,
}

impl Status {
    pub fn as_str(self) -> &'static str {
        match self {
            Status::Pass => "pass",
            Status::Fail => "fail",
            Status::Skipped => "skipped",
        }
    }
}

/// One named check. A failed check always carries a counterexample.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Check {
    pub name: String,
    pub status: Status,
    pub counterexample: Option<Evidence>,
    /// Skip reason or diagnostic remark.
    pub note: Option<String>,
}

impl Check {
    pub fn pass(name: impl Into<String>) -> Self {
        Check { name: name.into(), status: Status::Pass, counterexample: None, note: None }
    }

    pub fn fail(name: impl Into<String>, counterexample: Evidence) -> Self {
        Check { name: name.into(), status: Status::Fail, counterexample: Some(counterexample), note: None }
    }

    pub fn skipped(name: impl Into<String>, reason: impl Into<String>) -> Self {
        Check { name: name.into(), status: Status::Skipped, counterexample: None, note: Some(reason.into()) }
    }

    pub fn with_note(mut self, note: impl Into<String>) -> Self {
        self.note = Some(note.into());
        self
    }

    /// `pass` when `violation` is `None`, otherwise `fail` with it.
    pub fn from_violation(name: impl Into<String>, violation: Option<Evidence>) -> Self {
        match violation {
            None => Check::pass(name),
            Some(e) => Check::fail(name, e),
        }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct Summary {
    pub pass: usize,
    pub fail: usize,
    pub skipped: usize,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct VerificationReport {
    pub checks: Vec<Check>,
}

impl VerificationReport {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn single(check: Check) -> Self {
        VerificationReport { checks: alloc::vec![check] }
    }

    pub fn push(&mut self, check: Check) {
        self.checks.push(check);
    }

    pub fn extend(&mut self, other: VerificationReport) {
        self.checks.extend(other.checks);
    }

    pub fn summary(&self) -> Summary {
        let mut s = Summary::default();
        for c in &self.checks {
            match c.status {
                Status::Pass => s.pass += 1,
                Status::Fail => s.fail += 1,
                Status::Skipped => s.skipped += 1,
            }
        }
        s
    }

    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.status != Status::Fail)
    }

    pub fn check(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name)
    }
}
