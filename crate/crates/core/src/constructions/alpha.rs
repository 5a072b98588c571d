//! Strictly increasing maps `ω → ω`.

use super::shift::ShiftResult;
use crate::error::{Error, Result};
use serde_json::Value;
use std::sync::Arc;

pub trait Alpha: Send + Sync {
    fn eval(&self, n: u64) -> Result<u64>;
    fn name(&self) -> String;
    fn is_identity(&self) -> bool {
        false
    }
}

pub type AlphaRef = Arc<dyn Alpha>;

/// `α(n)` with `α(−1) = −1`.
pub fn alpha_at(a: &dyn Alpha, n: i64) -> Result<i64> {
    if n < 0 {
        Ok(-1)
    } else {
        Ok(a.eval(n as u64)? as i64)
    }
}

pub struct Identity;

impl Alpha for Identity {
    fn eval(&self, n: u64) -> Result<u64> {
        Ok(n)
    }
    fn name(&self) -> String {
        "identity".into()
    }
    fn is_identity(&self) -> bool {
        true
    }
}

/// `n ↦ a·n + b`.
pub struct Affine {
    a: u64,
    b: u64,
}

impl Affine {
    pub fn new(a: u64, b: u64) -> Result<Affine> {
        if a == 0 {
            return Err(Error::AlphaNotIncreasing(format!("slope 0 in {a}n+{b}")));
        }
        Ok(Affine { a, b })
    }
}

impl Alpha for Affine {
    fn eval(&self, n: u64) -> Result<u64> {
        n.checked_mul(self.a)
            .and_then(|x| x.checked_add(self.b))
            .ok_or_else(|| Error::Overflow(format!("{}n+{} at {n}", self.a, self.b)))
    }
    fn name(&self) -> String {
        format!("{}n+{}", self.a, self.b)
    }
    fn is_identity(&self) -> bool {
        self.a == 1 && self.b == 0
    }
}

/// Listed values, then steps of `step` after the last one.
pub struct Table {
    values: Vec<u64>,
    step: u64,
}

impl Table {
    pub fn new(values: Vec<u64>, step: u64) -> Result<Table> {
        if values.is_empty() || step == 0 || values.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::AlphaNotIncreasing(format!("table {values:?} with step {step}")));
        }
        Ok(Table { values, step })
    }
}

impl Alpha for Table {
    fn eval(&self, n: u64) -> Result<u64> {
        let k = self.values.len() as u64;
        if n < k {
            return Ok(self.values[n as usize]);
        }
        let last = *self.values.last().unwrap();
        (n - k + 1)
            .checked_mul(self.step)
            .and_then(|x| x.checked_add(last))
            .ok_or_else(|| Error::Overflow("table tail".into()))
    }
    fn name(&self) -> String {
        format!("table{:?}+{}", self.values, self.step)
    }
    fn is_identity(&self) -> bool {
        self.step == 1 && self.values.iter().enumerate().all(|(i, v)| *v == i as u64)
    }
}

/// Coordinate `n` of a filter shift.
pub struct ShiftAlpha {
    pub shift: Arc<ShiftResult>,
    pub coord: usize,
}

impl Alpha for ShiftAlpha {
    fn eval(&self, n: u64) -> Result<u64> {
        self.shift.alpha(self.coord, n)
    }
    fn name(&self) -> String {
        format!("shift[{}]", self.coord)
    }
}

/// `"identity"`, `{"affine": {"a": 2, "b": 1}}` or `{"table": {"values": [..], "step": s}}`.
pub fn alpha_from_json(v: &Value) -> Result<AlphaRef> {
    let bad = || Error::Config(format!("bad alpha {v}"));
    if v.as_str() == Some("identity") {
        return Ok(Arc::new(Identity));
    }
    if let Some(a) = v.get("affine") {
        let get = |k: &str| a.get(k).and_then(Value::as_u64).ok_or_else(bad);
        return Ok(Arc::new(Affine::new(get("a")?, get("b")?)?));
    }
    if let Some(t) = v.get("table") {
        let values: Vec<u64> =
            serde_json::from_value(t.get("values").cloned().ok_or_else(bad)?).map_err(|_| bad())?;
        let step = t.get("step").and_then(Value::as_u64).unwrap_or(1);
        return Ok(Arc::new(Table::new(values, step)?));
    }
    Err(bad())
}
