//! Exact rationals with a string wire form (`"a/b"` or `"a"`).

use num::{BigInt, BigRational, One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

pub type Q = BigRational;

pub fn q(n: i64) -> Q {
    BigRational::from_integer(BigInt::from(n))
}

pub fn qf(n: i64, d: i64) -> Q {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

/// `2^{-e}` exactly.
pub fn pow2_neg(e: u64) -> Q {
    BigRational::new(BigInt::one(), BigInt::one() << (e as usize))
}

pub fn fmt_q(x: &Q) -> String {
    if x.is_integer() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

pub fn parse_q(s: &str) -> Result<Q, String> {
    let s = s.trim();
    let bad = || format!("bad rational {s:?}");
    if let Some((n, d)) = s.split_once('/') {
        let n = BigInt::from_str(n.trim()).map_err(|_| bad())?;
        let d = BigInt::from_str(d.trim()).map_err(|_| bad())?;
        if d.is_zero() {
            return Err(bad());
        }
        Ok(BigRational::new(n, d))
    } else {
        Ok(BigRational::from_integer(BigInt::from_str(s).map_err(|_| bad())?))
    }
}

pub fn floor_i64(x: &Q) -> Option<i64> {
    x.floor().to_integer().to_i64()
}

pub fn ceil_i64(x: &Q) -> Option<i64> {
    x.ceil().to_integer().to_i64()
}

pub fn abs(x: &Q) -> Q {
    x.abs()
}

/// Serde adapter for a single rational.
pub mod serde_q {
    use super::*;

    pub fn serialize<S: Serializer>(x: &Q, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&fmt_q(x))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Q, D::Error> {
        let v = serde_json::Value::deserialize(d)?;
        match v {
            serde_json::Value::String(s) => parse_q(&s).map_err(serde::de::Error::custom),
            serde_json::Value::Number(n) if n.is_i64() => Ok(q(n.as_i64().unwrap())),
            other => Err(serde::de::Error::custom(format!("expected rational, got {other}"))),
        }
    }
}

/// An endpoint in `ℚ ∪ {−∞, +∞}`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Ext {
    NegInf,
    Fin(Q),
    PosInf,
}

impl Ext {
    pub fn fin(&self) -> Option<&Q> {
        match self {
            Ext::Fin(x) => Some(x),
            _ => None,
        }
    }
}

impl PartialOrd for Ext {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Ext {
    fn cmp(&self, other: &Self) -> Ordering {
        use Ext::*;
        match (self, other) {
            (NegInf, NegInf) | (PosInf, PosInf) => Ordering::Equal,
            (NegInf, _) | (_, PosInf) => Ordering::Less,
            (_, NegInf) | (PosInf, _) => Ordering::Greater,
            (Fin(a), Fin(b)) => a.cmp(b),
        }
    }
}

impl fmt::Display for Ext {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Ext::NegInf => write!(f, "-inf"),
            Ext::PosInf => write!(f, "inf"),
            Ext::Fin(x) => write!(f, "{}", fmt_q(x)),
        }
    }
}

impl Serialize for Ext {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for Ext {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let v = serde_json::Value::deserialize(d)?;
        match v {
            serde_json::Value::String(s) => match s.trim() {
                "-inf" => Ok(Ext::NegInf),
                "inf" | "+inf" => Ok(Ext::PosInf),
                t => parse_q(t).map(Ext::Fin).map_err(serde::de::Error::custom),
            },
            serde_json::Value::Number(n) if n.is_i64() => Ok(Ext::Fin(q(n.as_i64().unwrap()))),
            other => Err(serde::de::Error::custom(format!("expected endpoint, got {other}"))),
        }
    }
}

pub fn is_zero(x: &Q) -> bool {
    x.is_zero()
}
