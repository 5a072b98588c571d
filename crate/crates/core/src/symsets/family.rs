//! Indexed piece families: the son partitions that selections refer to.

use super::cantor;
use super::ClopenSet;
use crate::path::NodePath;
use crate::point::Point;
use crate::rational::{floor_i64, fmt_q, pow2_neg, q, Ext, Q};
use num::One;
use serde::{Deserialize, Serialize};
use std::fmt;

/// A region split into ω-indexed disjoint pieces.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum FamilyRef {
    /// Pieces `Cyl(v⌢s)` of `Cyl(v)`.
    Std(NodePath),
    /// Pieces `[x_s, x_{s+1})` of `[lo, hi)` with `x_s = hi − (hi−lo)·2^{−s}`.
    SorgSub { lo: Q, hi: Q },
    /// Pieces `[z_s, z_s + 1)` of the line, `z` zigzagging `0, 1, −1, 2, −2, …`.
    SorgRoot,
}

/// Zigzag enumeration of the integers.
pub fn zigzag(s: u64) -> i64 {
    if s % 2 == 1 {
        s.div_ceil(2) as i64
    } else {
        -((s / 2) as i64)
    }
}

pub fn zigzag_index(z: i64) -> u64 {
    if z > 0 {
        (2 * z - 1) as u64
    } else {
        (-2 * z) as u64
    }
}

/// `x_s = hi − (hi−lo)·2^{−s}`.
pub fn sub_point(lo: &Q, hi: &Q, s: u64) -> Q {
    hi - (hi - lo) * pow2_neg(s)
}

/// Index of the piece of `[lo, hi)` containing `x`.
pub fn sub_locate(lo: &Q, hi: &Q, x: &Q) -> Option<u64> {
    if x < lo || x >= hi {
        return None;
    }
    let r = (hi - lo) / (hi - x);
    // floor(log2 r), r >= 1
    let nb = r.numer().bits() as i64;
    let db = r.denom().bits() as i64;
    let mut e = (nb - db).max(0) as u64;
    let two = |e: u64| Q::from_integer(num::BigInt::one() << (e as usize));
    while e > 0 && two(e) > r {
        e -= 1;
    }
    while two(e + 1) <= r {
        e += 1;
    }
    Some(e)
}

/// Index of the smallest piece of `[lo, hi)` whose left end is at least `c`.
pub fn sub_first_at_least(lo: &Q, hi: &Q, c: &Q) -> Option<u64> {
    if c <= lo {
        return Some(0);
    }
    if c >= hi {
        return None;
    }
    let s = sub_locate(lo, hi, c)?;
    if &sub_point(lo, hi, s) == c {
        Some(s)
    } else {
        Some(s + 1)
    }
}

impl FamilyRef {
    pub fn region(&self) -> ClopenSet {
        match self {
            FamilyRef::Std(v) => ClopenSet::Cyl(v.clone()),
            FamilyRef::SorgSub { lo, hi } => ClopenSet::SorgIv(Ext::Fin(lo.clone()), Ext::Fin(hi.clone())),
            FamilyRef::SorgRoot => ClopenSet::sorg_line(),
        }
    }

    pub fn piece(&self, s: u64) -> ClopenSet {
        match self {
            FamilyRef::Std(v) => ClopenSet::Cyl(v.child(s)),
            FamilyRef::SorgSub { lo, hi } => ClopenSet::SorgIv(
                Ext::Fin(sub_point(lo, hi, s)),
                Ext::Fin(sub_point(lo, hi, s + 1)),
            ),
            FamilyRef::SorgRoot => {
                let z = q(zigzag(s));
                ClopenSet::SorgIv(Ext::Fin(z.clone()), Ext::Fin(z + q(1)))
            }
        }
    }

    /// Interval bounds of piece `s` for the Sorgenfrey families.
    pub fn piece_bounds(&self, s: u64) -> Option<(Q, Q)> {
        match self {
            FamilyRef::Std(_) => None,
            FamilyRef::SorgSub { lo, hi } => Some((sub_point(lo, hi, s), sub_point(lo, hi, s + 1))),
            FamilyRef::SorgRoot => {
                let z = q(zigzag(s));
                Some((z.clone(), z + q(1)))
            }
        }
    }

    /// Index of the piece containing `p`, if `p` lies in the region.
    pub fn locate(&self, p: &Point) -> Option<u64> {
        match (self, p) {
            (FamilyRef::Std(v), Point::Baire { .. }) => {
                let pre = p.restrict(v.height())?;
                (pre == v.0).then(|| p.at(v.height()).unwrap())
            }
            (FamilyRef::SorgSub { lo, hi }, Point::Sorg(x)) => sub_locate(lo, hi, x),
            (FamilyRef::SorgRoot, Point::Sorg(x)) => Some(zigzag_index(floor_i64(x)?)),
            _ => None,
        }
    }

    pub fn root_family(&self) -> bool {
        matches!(self, FamilyRef::SorgRoot)
    }

    pub fn is_sorg(&self) -> bool {
        !matches!(self, FamilyRef::Std(_))
    }

    pub fn to_json(&self) -> serde_json::Value {
        match self {
            FamilyRef::Std(v) => serde_json::json!({ "std": v }),
            FamilyRef::SorgSub { lo, hi } => serde_json::json!({"sorgsub": {"lo": fmt_q(lo), "hi": fmt_q(hi)}}),
            FamilyRef::SorgRoot => serde_json::json!("sorgroot"),
        }
    }

    pub fn from_json(v: &serde_json::Value) -> Result<FamilyRef, String> {
        if v.as_str() == Some("sorgroot") {
            return Ok(FamilyRef::SorgRoot);
        }
        if let Some(p) = v.get("std") {
            let path: NodePath = serde_json::from_value(p.clone()).map_err(|e| e.to_string())?;
            return Ok(FamilyRef::Std(path));
        }
        if let Some(b) = v.get("sorgsub") {
            let get = |k: &str| -> Result<Q, String> {
                let s = b.get(k).and_then(|x| x.as_str()).ok_or(format!("sorgsub needs {k}"))?;
                crate::rational::parse_q(s)
            };
            let (lo, hi) = (get("lo")?, get("hi")?);
            if lo >= hi {
                return Err("sorgsub needs lo < hi".into());
            }
            return Ok(FamilyRef::SorgSub { lo, hi });
        }
        Err(format!("bad family {v}"))
    }

    /// Whether this family's region lies inside a single piece of `outer`;
    /// returns that piece.
    pub fn inside_piece_of(&self, outer: &FamilyRef) -> Option<u64> {
        match (self, outer) {
            (FamilyRef::Std(w), FamilyRef::Std(v)) if v.is_below(w) => Some(w.0[v.height()]),
            (FamilyRef::SorgSub { lo, hi }, _) if outer.is_sorg() => {
                let s = outer.locate(&Point::Sorg(lo.clone()))?;
                let (_, b) = outer.piece_bounds(s)?;
                (hi <= &b).then_some(s)
            }
            _ => None,
        }
    }
}

impl fmt::Display for FamilyRef {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FamilyRef::Std(v) => write!(f, "std{v}"),
            FamilyRef::SorgSub { lo, hi } => write!(f, "sub[{},{})", fmt_q(lo), fmt_q(hi)),
            FamilyRef::SorgRoot => write!(f, "root"),
        }
    }
}

/// Piece indices `s` whose decoded tuple `dec_k(s)` extends `tau` and, when
/// `|tau| < k`, has entry `from` or more at position `|tau|`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct TupleSel {
    pub k: usize,
    pub tau: Vec<u64>,
    pub from: u64,
}

impl TupleSel {
    pub fn new(k: usize, tau: Vec<u64>, from: u64) -> TupleSel {
        let from = if tau.len() >= k { 0 } else { from };
        TupleSel { k, tau, from }
    }

    pub fn contains(&self, s: u64) -> bool {
        let t = cantor::decode(self.k, s);
        if t[..self.tau.len()] != self.tau[..] {
            return false;
        }
        self.tau.len() >= self.k || t[self.tau.len()] >= self.from
    }

    pub fn is_singleton(&self) -> bool {
        self.tau.len() >= self.k
    }

    pub fn is_everything(&self) -> bool {
        self.tau.is_empty() && self.from == 0
    }

    pub fn singleton_value(&self) -> Option<u64> {
        if self.is_singleton() {
            cantor::encode(&self.tau)
        } else {
            None
        }
    }
}
