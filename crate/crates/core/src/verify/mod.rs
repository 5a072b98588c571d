//! Check suites and their reports.

mod baire;
mod grow;
pub mod samples;
mod theorems;

pub use baire::{baire_suite, BaireParams};
pub use grow::{fip_check, grows_into_suite};
pub use theorems::{
    box_decomposition_check, cocountable_checks, StageBounds, hybrid_oracle_suite, rescale_checks, shift_check, theorem2_checks,
};

use crate::symsets::Decision;
use serde::Serialize;
use serde_json::Value;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Undecided,
}

/// One check of a suite, aggregated over everything it looked at.
#[derive(Clone, Debug, Serialize)]
pub struct Entry {
    pub check: String,
    /// The property the check instantiates.
    pub clause: String,
    pub status: Status,
    pub checked: usize,
    pub detail: String,
    pub witness: Option<Value>,
}

#[derive(Clone, Debug, Serialize)]
pub struct Report {
    pub suite: String,
    pub subject: String,
    pub entries: Vec<Entry>,
}

impl Report {
    pub fn new(suite: &str, subject: impl Into<String>) -> Report {
        Report { suite: suite.into(), subject: subject.into(), entries: Vec::new() }
    }

    pub fn status(&self) -> Status {
        if self.entries.iter().any(|e| e.status == Status::Fail) {
            Status::Fail
        } else if self.entries.iter().any(|e| e.status == Status::Undecided) {
            Status::Undecided
        } else {
            Status::Pass
        }
    }

    pub fn failures(&self) -> Vec<&Entry> {
        self.entries.iter().filter(|e| e.status == Status::Fail).collect()
    }

    pub fn entry(&self, check: &str) -> Option<&Entry> {
        self.entries.iter().find(|e| e.check == check)
    }

    /// 0 all pass, 1 a violation, 3 only inconclusive checks.
    pub fn exit_code(&self) -> i32 {
        match self.status() {
            Status::Pass => 0,
            Status::Fail => 1,
            Status::Undecided => 3,
        }
    }

    pub fn merge(&mut self, other: Report) {
        self.entries.extend(other.entries);
    }

    pub fn to_json(&self) -> Value {
        let mut v = serde_json::to_value(self).expect("reports serialize");
        v["status"] = serde_json::to_value(self.status()).expect("status serializes");
        v
    }
}

/// Accumulates outcomes of one check, keeping the first failure.
pub struct Tally {
    check: String,
    clause: String,
    checked: usize,
    fail: Option<(String, Option<Value>)>,
    undecided: Option<String>,
}

impl Tally {
    pub fn new(check: &str, clause: &str) -> Tally {
        Tally { check: check.into(), clause: clause.into(), checked: 0, fail: None, undecided: None }
    }

    pub fn pass(&mut self) {
        self.checked += 1;
    }

    pub fn fail(&mut self, detail: impl Into<String>, witness: Option<Value>) {
        self.checked += 1;
        if self.fail.is_none() {
            self.fail = Some((detail.into(), witness));
        }
    }

    pub fn undecided(&mut self, detail: impl Into<String>) {
        self.checked += 1;
        if self.undecided.is_none() {
            self.undecided = Some(detail.into());
        }
    }

    /// Records `d`, where `Yes` is the good outcome.
    pub fn decide(&mut self, d: Decision, detail: impl FnOnce() -> String, witness: impl FnOnce() -> Option<Value>) {
        match d {
            Decision::Yes => self.pass(),
            Decision::No => self.fail(detail(), witness()),
            Decision::Unknown => self.undecided(detail()),
        }
    }

    pub fn absorb(&mut self, other: Tally) {
        self.checked += other.checked;
        if self.fail.is_none() {
            self.fail = other.fail;
        }
        if self.undecided.is_none() {
            self.undecided = other.undecided;
        }
    }

    pub fn finish(self) -> Entry {
        let (status, detail, witness) = match (self.fail, self.undecided) {
            (Some((d, w)), _) => (Status::Fail, d, w),
            (None, Some(d)) => (Status::Undecided, d, None),
            (None, None) => (Status::Pass, format!("{} cases", self.checked), None),
        };
        Entry { check: self.check, clause: self.clause, status, checked: self.checked, detail, witness }
    }
}
