//! Exactly representable points.

use crate::rational::{fmt_q, Q};
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use serde_json::{json, Value};
use std::fmt;

/// A point of Baire space, the Sorgenfrey line, or a product of those.
///
/// Baire points are eventually constant. Product points list explicit
/// coordinates and repeat `tail` for every later coordinate.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Point {
    Baire { prefix: Vec<u64>, tail: u64 },
    Sorg(Q),
    Product { explicit: Vec<Point>, tail: Box<Point> },
}

impl Point {
    pub fn baire(prefix: impl Into<Vec<u64>>, tail: u64) -> Point {
        let mut prefix = prefix.into();
        while prefix.last() == Some(&tail) {
            prefix.pop();
        }
        Point::Baire { prefix, tail }
    }

    pub fn sorg(x: Q) -> Point {
        Point::Sorg(x)
    }

    pub fn product(explicit: Vec<Point>, tail: Point) -> Point {
        let mut explicit = explicit;
        while explicit.last() == Some(&tail) {
            explicit.pop();
        }
        Point::Product { explicit, tail: Box::new(tail) }
    }

    /// Product point from a finite list whose last entry repeats.
    pub fn product_list(mut coords: Vec<Point>) -> Option<Point> {
        let tail = coords.pop()?;
        Some(Point::product(coords, tail))
    }

    /// `p(i)` for a Baire point.
    pub fn at(&self, i: usize) -> Option<u64> {
        match self {
            Point::Baire { prefix, tail } => Some(prefix.get(i).copied().unwrap_or(*tail)),
            _ => None,
        }
    }

    /// Coordinate `i` of a product point.
    pub fn coord(&self, i: usize) -> Option<&Point> {
        match self {
            Point::Product { explicit, tail } => Some(explicit.get(i).unwrap_or(tail)),
            _ => None,
        }
    }

    pub fn as_sorg(&self) -> Option<&Q> {
        match self {
            Point::Sorg(x) => Some(x),
            _ => None,
        }
    }

    /// First `n` entries of a Baire point.
    pub fn restrict(&self, n: usize) -> Option<Vec<u64>> {
        (0..n).map(|i| self.at(i)).collect()
    }

    pub fn space_tag(&self) -> &'static str {
        match self {
            Point::Baire { .. } => "baire",
            Point::Sorg(_) => "sorg",
            Point::Product { .. } => "prod",
        }
    }

    pub fn to_json(&self) -> Value {
        match self {
            Point::Baire { prefix, tail } => json!({"baire": {"prefix": prefix, "tail": tail}}),
            Point::Sorg(x) => json!({ "sorg": fmt_q(x) }),
            Point::Product { explicit, tail } => {
                let mut v: Vec<Value> = explicit.iter().map(Point::to_json).collect();
                v.push(tail.to_json());
                json!({ "prod": v })
            }
        }
    }

    pub fn from_json(v: &Value) -> Result<Point, String> {
        let obj = v.as_object().ok_or_else(|| format!("point must be an object: {v}"))?;
        if obj.len() != 1 {
            return Err(format!("point must have exactly one tag: {v}"));
        }
        let (tag, body) = obj.iter().next().unwrap();
        match tag.as_str() {
            "baire" => {
                let prefix: Vec<u64> = match body.get("prefix") {
                    Some(p) => serde_json::from_value(p.clone()).map_err(|e| e.to_string())?,
                    None => Vec::new(),
                };
                let tail = body.get("tail").and_then(Value::as_u64).unwrap_or(0);
                Ok(Point::baire(prefix, tail))
            }
            "sorg" => {
                let x: Q = match body {
                    Value::String(s) => crate::rational::parse_q(s)?,
                    Value::Number(n) if n.is_i64() => crate::rational::q(n.as_i64().unwrap()),
                    _ => return Err(format!("bad sorg point {body}")),
                };
                Ok(Point::Sorg(x))
            }
            "prod" => {
                let items = body.as_array().ok_or("prod point must be a list")?;
                let coords = items.iter().map(Point::from_json).collect::<Result<Vec<_>, _>>()?;
                Point::product_list(coords).ok_or_else(|| "empty prod point".to_string())
            }
            other => Err(format!("unknown point tag {other:?}")),
        }
    }
}

impl Serialize for Point {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        self.to_json().serialize(s)
    }
}

impl<'de> Deserialize<'de> for Point {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let v = Value::deserialize(d)?;
        Point::from_json(&v).map_err(serde::de::Error::custom)
    }
}

impl fmt::Display for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Point::Baire { prefix, tail } => {
                write!(f, "(")?;
                for e in prefix {
                    write!(f, "{e},")?;
                }
                write!(f, "{tail}^ω)")
            }
            Point::Sorg(x) => write!(f, "{}", fmt_q(x)),
            Point::Product { explicit, tail } => {
                write!(f, "[")?;
                for e in explicit {
                    write!(f, "{e}; ")?;
                }
                write!(f, "{tail}...]")
            }
        }
    }
}
