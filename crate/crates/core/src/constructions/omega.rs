//! Eventually periodic subsets of ω and countable families of them.

use crate::error::{Error, Result};
use num::integer::lcm;
use serde_json::{json, Value};
use std::collections::BTreeSet;
use std::fmt;

/// `{x < start : x ∈ head} ∪ {x ≥ start : x mod period ∈ residues}`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct OmegaSet {
    head: BTreeSet<u64>,
    start: u64,
    period: u64,
    residues: BTreeSet<u64>,
}

impl OmegaSet {
    pub fn finite(elems: impl IntoIterator<Item = u64>) -> OmegaSet {
        let head: BTreeSet<u64> = elems.into_iter().collect();
        let start = head.iter().next_back().map_or(0, |m| m + 1);
        OmegaSet { head, start, period: 1, residues: BTreeSet::new() }
    }

    /// `ω ∖ missing`.
    pub fn cofinite(missing: impl IntoIterator<Item = u64>) -> OmegaSet {
        let missing: BTreeSet<u64> = missing.into_iter().collect();
        let start = missing.iter().next_back().map_or(0, |m| m + 1);
        let head = (0..start).filter(|x| !missing.contains(x)).collect();
        OmegaSet { head, start, period: 1, residues: [0].into() }
    }

    /// `ω ∖ m`.
    pub fn from(m: u64) -> OmegaSet {
        OmegaSet { head: BTreeSet::new(), start: m, period: 1, residues: [0].into() }
    }

    /// Multiples of `step` that are at least `above`.
    pub fn progression(step: u64, above: u64) -> Result<OmegaSet> {
        if step == 0 {
            return Err(Error::Config("progression step must be positive".into()));
        }
        Ok(OmegaSet { head: BTreeSet::new(), start: above, period: step, residues: [0].into() })
    }

    pub fn contains(&self, x: u64) -> bool {
        if x < self.start {
            self.head.contains(&x)
        } else {
            self.residues.contains(&(x % self.period))
        }
    }

    pub fn is_infinite(&self) -> bool {
        !self.residues.is_empty()
    }

    /// Least member `≥ x`.
    pub fn next_at_least(&self, x: u64) -> Option<u64> {
        if x < self.start {
            if let Some(&h) = self.head.range(x..).next() {
                return Some(h);
            }
        }
        let from = x.max(self.start);
        (0..self.period).map(|d| from + d).find(|y| self.contains(*y))
    }

    /// Members below `bound`.
    pub fn below(&self, bound: u64) -> impl Iterator<Item = u64> + '_ {
        (0..bound).filter(|x| self.contains(*x))
    }

    fn horizon(&self, other: &OmegaSet) -> (u64, u64) {
        (self.start.max(other.start), lcm(self.period, other.period))
    }

    pub fn intersect(&self, other: &OmegaSet) -> OmegaSet {
        let (start, period) = self.horizon(other);
        let head = (0..start).filter(|x| self.contains(*x) && other.contains(*x)).collect();
        // x_r: least x >= start with x ≡ r
        let x_r = |r: u64| start + (r + period - start % period) % period;
        let residues = (0..period).filter(|r| self.contains(x_r(*r)) && other.contains(x_r(*r))).collect();
        OmegaSet { head, start, period, residues }
    }

    pub fn is_subset(&self, other: &OmegaSet) -> bool {
        let (start, period) = self.horizon(other);
        (0..start + period).all(|x| !self.contains(x) || other.contains(x))
    }

    pub fn is_empty(&self) -> bool {
        self.head.is_empty() && self.residues.is_empty()
    }

    pub fn to_json(&self) -> Value {
        json!({"head": self.head, "start": self.start, "period": self.period, "residues": self.residues})
    }

    /// Accepts `{"finite": [..]}`, `{"cofinite": [..]}`, `{"from": m}`,
    /// `{"progression": {"step": k, "above": m}}` or the raw form.
    pub fn from_json(v: &Value) -> std::result::Result<OmegaSet, String> {
        let nums = |x: &Value| -> std::result::Result<Vec<u64>, String> {
            serde_json::from_value(x.clone()).map_err(|e| e.to_string())
        };
        if let Some(x) = v.get("finite") {
            return Ok(OmegaSet::finite(nums(x)?));
        }
        if let Some(x) = v.get("cofinite") {
            return Ok(OmegaSet::cofinite(nums(x)?));
        }
        if let Some(m) = v.get("from").and_then(Value::as_u64) {
            return Ok(OmegaSet::from(m));
        }
        if let Some(p) = v.get("progression") {
            let step = p.get("step").and_then(Value::as_u64).ok_or("progression needs step")?;
            let above = p.get("above").and_then(Value::as_u64).unwrap_or(0);
            return OmegaSet::progression(step, above).map_err(|e| e.to_string());
        }
        let start = v.get("start").and_then(Value::as_u64).ok_or(format!("bad ω-set {v}"))?;
        let period = v.get("period").and_then(Value::as_u64).filter(|p| *p > 0).ok_or("bad period")?;
        let head: BTreeSet<u64> = nums(v.get("head").unwrap_or(&json!([])))?.into_iter().filter(|x| *x < start).collect();
        let residues = nums(v.get("residues").unwrap_or(&json!([])))?.into_iter().map(|r| r % period).collect();
        Ok(OmegaSet { head, start, period, residues })
    }
}

impl fmt::Display for OmegaSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for h in &self.head {
            write!(f, "{h},")?;
        }
        if self.is_infinite() {
            write!(f, " x≥{} with x mod {} in {:?}", self.start, self.period, self.residues)?;
        }
        write!(f, "}}")
    }
}

/// A countable family `{G_i : i ∈ ω}` listed by a finite prefix whose last
/// member repeats forever.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FilterCert {
    pub sets: Vec<OmegaSet>,
}

impl FilterCert {
    pub fn new(sets: Vec<OmegaSet>) -> Result<FilterCert> {
        if sets.is_empty() {
            return Err(Error::Config("a filter certificate needs at least one set".into()));
        }
        Ok(FilterCert { sets })
    }

    /// `{ω ∖ m : m ≤ max}`.
    pub fn cofinite_upto(max: u64) -> FilterCert {
        FilterCert { sets: (0..=max).map(OmegaSet::from).collect() }
    }

    /// `{step·ℕ ∖ m : m ≤ max}`.
    pub fn progression_upto(step: u64, max: u64) -> Result<FilterCert> {
        Ok(FilterCert { sets: (0..=max).map(|m| OmegaSet::progression(step, m)).collect::<Result<_>>()? })
    }

    pub fn get(&self, i: usize) -> &OmegaSet {
        &self.sets[i.min(self.sets.len() - 1)]
    }

    pub fn to_json(&self) -> Value {
        Value::Array(self.sets.iter().map(OmegaSet::to_json).collect())
    }

    /// A list of sets, or `{"cofinite_upto": m}` / `{"progression_upto": {"step": k, "max": m}}`.
    pub fn from_json(v: &Value) -> std::result::Result<FilterCert, String> {
        if let Some(m) = v.get("cofinite_upto").and_then(Value::as_u64) {
            return Ok(FilterCert::cofinite_upto(m));
        }
        if let Some(p) = v.get("progression_upto") {
            let step = p.get("step").and_then(Value::as_u64).ok_or("progression_upto needs step")?;
            let max = p.get("max").and_then(Value::as_u64).unwrap_or(0);
            return FilterCert::progression_upto(step, max).map_err(|e| e.to_string());
        }
        let items = v.as_array().ok_or(format!("bad filter certificate {v}"))?;
        let sets = items.iter().map(OmegaSet::from_json).collect::<std::result::Result<Vec<_>, _>>()?;
        FilterCert::new(sets).map_err(|e| e.to_string())
    }
}
