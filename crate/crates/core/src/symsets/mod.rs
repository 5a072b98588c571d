//! Symbolic clopen sets and their exact decision procedures.

pub mod boxdiff;
pub mod cantor;
mod decide;
pub mod expr;
pub mod family;

pub use decide::{
    are_disjoint, emptiness, equal, find_point, is_empty, is_subset, point_in_difference, Emptiness,
};
pub use expr::Expr;
pub use family::{FamilyRef, TupleSel};

use crate::error::{Error, Result};
use crate::path::NodePath;
use crate::point::Point;
use crate::rational::{Ext, Q};
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use serde_json::{json, Value};
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

/// Three-valued answer of a symbolic test.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Decision {
    Yes,
    No,
    Unknown,
}

impl Decision {
    pub fn from_bool(b: bool) -> Decision {
        if b {
            Decision::Yes
        } else {
            Decision::No
        }
    }

    pub fn is_yes(self) -> bool {
        self == Decision::Yes
    }
}

/// A clopen set of Baire space, the Sorgenfrey line, or a product.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ClopenSet {
    Empty,
    /// `{p : v ⊆ p}`.
    Cyl(NodePath),
    /// `⋃{Cyl(v⌢l) : l ≥ m}`.
    TailCyl(NodePath, u64),
    /// `[a, b)`.
    SorgIv(Ext, Ext),
    Minus(Box<ClopenSet>, Vec<Point>),
    FinUnion(Vec<ClopenSet>),
    /// Finitely supported product set; unsupported coordinates are whole.
    Box(BTreeMap<usize, ClopenSet>),
    /// `⋃{piece(s) : s ∈ index}` of an indexed family.
    Sel(FamilyRef, TupleSel),
}

impl ClopenSet {
    pub fn cyl(v: impl Into<NodePath>) -> ClopenSet {
        ClopenSet::Cyl(v.into())
    }

    pub fn tail_cyl(v: impl Into<NodePath>, m: u64) -> ClopenSet {
        ClopenSet::TailCyl(v.into(), m).normalize()
    }

    pub fn sorg_iv(a: Q, b: Q) -> ClopenSet {
        if a < b {
            ClopenSet::SorgIv(Ext::Fin(a), Ext::Fin(b))
        } else {
            ClopenSet::Empty
        }
    }

    pub fn sorg_ray(a: Q) -> ClopenSet {
        ClopenSet::SorgIv(Ext::Fin(a), Ext::PosInf)
    }

    pub fn sorg_interval(a: Ext, b: Ext) -> ClopenSet {
        if a < b && a != Ext::PosInf && b != Ext::NegInf {
            ClopenSet::SorgIv(a, b)
        } else {
            ClopenSet::Empty
        }
    }

    pub fn sorg_line() -> ClopenSet {
        ClopenSet::SorgIv(Ext::NegInf, Ext::PosInf)
    }

    pub fn full_product() -> ClopenSet {
        ClopenSet::Box(BTreeMap::new())
    }

    /// The whole space.
    pub fn full(space: &crate::space::Space) -> ClopenSet {
        match space {
            crate::space::Space::Baire => ClopenSet::Cyl(NodePath::root()),
            crate::space::Space::Sorg => ClopenSet::sorg_line(),
            crate::space::Space::Product { .. } => ClopenSet::full_product(),
        }
    }

    pub fn minus(a: ClopenSet, pts: Vec<Point>) -> ClopenSet {
        ClopenSet::Minus(Box::new(a), pts).normalize()
    }

    /// Union of sets the caller knows to be pairwise disjoint.
    pub fn union_disjoint(members: Vec<ClopenSet>) -> ClopenSet {
        ClopenSet::FinUnion(members).normalize()
    }

    /// Union with the disjointness of members checked.
    pub fn union_checked(space: &crate::space::Space, members: Vec<ClopenSet>) -> Result<ClopenSet> {
        for i in 0..members.len() {
            for j in 0..i {
                if are_disjoint(space, &members[i], &members[j])? != Decision::Yes {
                    return Err(Error::PartitionViolation {
                        node: NodePath::root(),
                        detail: format!("union members {j} and {i} are not disjoint"),
                    });
                }
            }
        }
        Ok(ClopenSet::union_disjoint(members))
    }

    pub fn boxed(factors: BTreeMap<usize, ClopenSet>) -> ClopenSet {
        ClopenSet::Box(factors).normalize()
    }

    pub fn boxed_from(factors: impl IntoIterator<Item = (usize, ClopenSet)>) -> ClopenSet {
        ClopenSet::boxed(factors.into_iter().collect())
    }

    pub fn sel(family: FamilyRef, index: TupleSel) -> ClopenSet {
        ClopenSet::Sel(family, index).normalize()
    }

    pub fn is_empty_syntax(&self) -> bool {
        matches!(self, ClopenSet::Empty)
    }

    /// Whether the set is syntactically the whole factor space.
    pub fn is_full_syntax(&self) -> bool {
        match self {
            ClopenSet::Cyl(v) => v.is_root(),
            ClopenSet::SorgIv(Ext::NegInf, Ext::PosInf) => true,
            ClopenSet::Box(m) => m.is_empty(),
            _ => false,
        }
    }

    /// Canonical form: idempotent, preserves the denoted set.
    pub fn normalize(&self) -> ClopenSet {
        match self {
            ClopenSet::Empty | ClopenSet::Cyl(_) => self.clone(),
            ClopenSet::TailCyl(v, 0) => ClopenSet::Cyl(v.clone()),
            ClopenSet::TailCyl(..) => self.clone(),
            ClopenSet::SorgIv(a, b) => {
                if a < b && *a != Ext::PosInf && *b != Ext::NegInf {
                    self.clone()
                } else {
                    ClopenSet::Empty
                }
            }
            ClopenSet::Minus(a, pts) => {
                let mut base = a.normalize();
                let mut all: BTreeSet<Point> = pts.iter().cloned().collect();
                while let ClopenSet::Minus(inner, more) = base {
                    all.extend(more);
                    base = *inner;
                }
                if base == ClopenSet::Empty {
                    return ClopenSet::Empty;
                }
                let kept: Vec<Point> = all.into_iter().filter(|p| base.member(p).unwrap_or(false)).collect();
                if kept.is_empty() {
                    base
                } else {
                    ClopenSet::Minus(Box::new(base), kept)
                }
            }
            ClopenSet::FinUnion(ms) => {
                let mut flat = Vec::new();
                for m in ms {
                    match m.normalize() {
                        ClopenSet::Empty => {}
                        ClopenSet::FinUnion(inner) => flat.extend(inner),
                        other => flat.push(other),
                    }
                }
                flat.sort();
                flat.dedup();
                merge_adjacent(&mut flat);
                match flat.len() {
                    0 => ClopenSet::Empty,
                    1 => flat.pop().unwrap(),
                    _ => ClopenSet::FinUnion(flat),
                }
            }
            ClopenSet::Box(m) => {
                let mut out = BTreeMap::new();
                for (i, f) in m {
                    let f = f.normalize();
                    if f == ClopenSet::Empty {
                        return ClopenSet::Empty;
                    }
                    if !f.is_full_syntax() {
                        out.insert(*i, f);
                    }
                }
                ClopenSet::Box(out)
            }
            ClopenSet::Sel(fam, idx) => {
                if let Some(s) = idx.singleton_value() {
                    fam.piece(s)
                } else if idx.is_everything() {
                    fam.region().normalize()
                } else {
                    self.clone()
                }
            }
        }
    }

    /// Exact membership.
    pub fn member(&self, p: &Point) -> Result<bool> {
        let mismatch = || Error::SpaceMismatch(format!("point {p} vs set {self}"));
        Ok(match self {
            ClopenSet::Empty => false,
            ClopenSet::Cyl(v) => {
                let pre = p.restrict(v.height()).ok_or_else(mismatch)?;
                pre == v.0
            }
            ClopenSet::TailCyl(v, m) => {
                let pre = p.restrict(v.height()).ok_or_else(mismatch)?;
                pre == v.0 && p.at(v.height()).unwrap() >= *m
            }
            ClopenSet::SorgIv(a, b) => {
                let x = Ext::Fin(p.as_sorg().ok_or_else(mismatch)?.clone());
                *a <= x && x < *b
            }
            ClopenSet::Minus(a, pts) => a.member(p)? && !pts.contains(p),
            ClopenSet::FinUnion(ms) => {
                for m in ms {
                    if m.member(p)? {
                        return Ok(true);
                    }
                }
                false
            }
            ClopenSet::Box(m) => {
                if !matches!(p, Point::Product { .. }) {
                    return Err(mismatch());
                }
                for (i, f) in m {
                    if !f.member(p.coord(*i).unwrap())? {
                        return Ok(false);
                    }
                }
                true
            }
            ClopenSet::Sel(fam, idx) => {
                match (fam, p) {
                    (FamilyRef::Std(_), Point::Baire { .. }) | (FamilyRef::SorgSub { .. } | FamilyRef::SorgRoot, Point::Sorg(_)) => {}
                    _ => return Err(mismatch()),
                }
                fam.locate(p).is_some_and(|s| idx.contains(s))
            }
        })
    }

    /// Coarse space tag of the set, when syntactically determined.
    pub fn kind(&self) -> Option<&'static str> {
        match self {
            ClopenSet::Empty => None,
            ClopenSet::Cyl(_) | ClopenSet::TailCyl(..) => Some("baire"),
            ClopenSet::SorgIv(..) => Some("sorg"),
            ClopenSet::Minus(a, pts) => a.kind().or_else(|| pts.first().map(Point::space_tag)),
            ClopenSet::FinUnion(ms) => ms.iter().find_map(ClopenSet::kind),
            ClopenSet::Box(_) => Some("prod"),
            ClopenSet::Sel(f, _) => Some(if f.is_sorg() { "sorg" } else { "baire" }),
        }
    }

    /// A point of the set found structurally; `None` if none is apparent.
    pub fn sample_point(&self, space: &crate::space::Space) -> Option<Point> {
        find_point(space, self).ok().flatten()
    }

    /// Every constant mentioned, for eventual-atomicity bounds.
    pub fn constants(&self) -> Constants {
        let mut c = Constants::default();
        c.add_set(self);
        c
    }

    pub fn to_json(&self) -> Value {
        match self {
            ClopenSet::Empty => json!("empty"),
            ClopenSet::Cyl(v) => json!({ "cyl": v }),
            ClopenSet::TailCyl(v, m) => json!({"tailcyl": {"node": v, "from": m}}),
            ClopenSet::SorgIv(a, b) => json!({"sorg": {"lo": a.to_string(), "hi": b.to_string()}}),
            ClopenSet::Minus(a, pts) => {
                json!({"minus": {"set": a.to_json(), "points": pts.iter().map(Point::to_json).collect::<Vec<_>>()}})
            }
            ClopenSet::FinUnion(ms) => json!({ "union": ms.iter().map(ClopenSet::to_json).collect::<Vec<_>>() }),
            ClopenSet::Box(m) => {
                let obj: serde_json::Map<String, Value> = m.iter().map(|(i, f)| (i.to_string(), f.to_json())).collect();
                json!({ "box": obj })
            }
            ClopenSet::Sel(f, idx) => {
                json!({"sel": {"family": f.to_json(), "k": idx.k, "tau": idx.tau, "from": idx.from}})
            }
        }
    }

    pub fn from_json(v: &Value) -> std::result::Result<ClopenSet, String> {
        if v.as_str() == Some("empty") {
            return Ok(ClopenSet::Empty);
        }
        let obj = v.as_object().ok_or_else(|| format!("set must be an object: {v}"))?;
        if obj.len() != 1 {
            return Err(format!("set must have exactly one tag: {v}"));
        }
        let (tag, body) = obj.iter().next().unwrap();
        let path = |x: &Value| -> std::result::Result<NodePath, String> {
            serde_json::from_value(x.clone()).map_err(|e| e.to_string())
        };
        match tag.as_str() {
            "cyl" => Ok(ClopenSet::Cyl(path(body)?)),
            "tailcyl" => {
                let node = path(body.get("node").ok_or("tailcyl needs node")?)?;
                let m = body.get("from").and_then(Value::as_u64).ok_or("tailcyl needs from")?;
                Ok(ClopenSet::TailCyl(node, m))
            }
            "sorg" => {
                let lo: Ext = serde_json::from_value(body.get("lo").cloned().unwrap_or(json!("-inf"))).map_err(|e| e.to_string())?;
                let hi: Ext = serde_json::from_value(body.get("hi").cloned().unwrap_or(json!("inf"))).map_err(|e| e.to_string())?;
                if lo >= hi || lo == Ext::PosInf || hi == Ext::NegInf {
                    return Err(format!("empty or malformed interval {body}"));
                }
                Ok(ClopenSet::SorgIv(lo, hi))
            }
            "minus" => {
                let set = ClopenSet::from_json(body.get("set").ok_or("minus needs set")?)?;
                let pts = body
                    .get("points")
                    .and_then(Value::as_array)
                    .ok_or("minus needs points")?
                    .iter()
                    .map(Point::from_json)
                    .collect::<std::result::Result<Vec<_>, _>>()?;
                Ok(ClopenSet::Minus(Box::new(set), pts))
            }
            "union" => {
                let ms = body
                    .as_array()
                    .ok_or("union needs a list")?
                    .iter()
                    .map(ClopenSet::from_json)
                    .collect::<std::result::Result<Vec<_>, _>>()?;
                Ok(ClopenSet::FinUnion(ms))
            }
            "box" => {
                let o = body.as_object().ok_or("box needs an object")?;
                let mut m = BTreeMap::new();
                for (k, f) in o {
                    let i: usize = k.parse().map_err(|_| format!("bad coordinate {k:?}"))?;
                    m.insert(i, ClopenSet::from_json(f)?);
                }
                Ok(ClopenSet::Box(m))
            }
            "sel" => {
                let fam = FamilyRef::from_json(body.get("family").ok_or("sel needs family")?)?;
                let k = body.get("k").and_then(Value::as_u64).ok_or("sel needs k")? as usize;
                let tau: Vec<u64> = serde_json::from_value(body.get("tau").cloned().unwrap_or(json!([]))).map_err(|e| e.to_string())?;
                let from = body.get("from").and_then(Value::as_u64).unwrap_or(0);
                if k == 0 || tau.len() > k {
                    return Err("sel needs 1 <= k and |tau| <= k".into());
                }
                Ok(ClopenSet::Sel(fam, TupleSel::new(k, tau, from)))
            }
            other => Err(format!("unknown set tag {other:?}")),
        }
    }
}

fn merge_adjacent(items: &mut Vec<ClopenSet>) {
    loop {
        let mut merged = None;
        'outer: for i in 0..items.len() {
            for j in 0..items.len() {
                if i == j {
                    continue;
                }
                if let Some(m) = merge_pair(&items[i], &items[j]) {
                    merged = Some((i, j, m));
                    break 'outer;
                }
            }
        }
        match merged {
            None => return,
            Some((i, j, m)) => {
                let (hi, lo) = if i > j { (i, j) } else { (j, i) };
                items.remove(hi);
                items.remove(lo);
                items.push(m);
                items.sort();
            }
        }
    }
}

fn merge_pair(a: &ClopenSet, b: &ClopenSet) -> Option<ClopenSet> {
    match (a, b) {
        (ClopenSet::Cyl(x), ClopenSet::TailCyl(v, m)) => {
            let (par, last) = x.parent()?;
            (par == *v && last + 1 == *m).then(|| ClopenSet::TailCyl(v.clone(), last).normalize())
        }
        (ClopenSet::SorgIv(a1, b1), ClopenSet::SorgIv(a2, b2)) if b1 == a2 => {
            Some(ClopenSet::SorgIv(a1.clone(), b2.clone()))
        }
        _ => None,
    }
}

impl Serialize for ClopenSet {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_json().serialize(s)
    }
}

impl<'de> Deserialize<'de> for ClopenSet {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let v = Value::deserialize(d)?;
        ClopenSet::from_json(&v).map_err(serde::de::Error::custom)
    }
}

impl fmt::Display for ClopenSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ClopenSet::Empty => write!(f, "∅"),
            ClopenSet::Cyl(v) => write!(f, "S{v}"),
            ClopenSet::TailCyl(v, m) => write!(f, "S~{m}{v}"),
            ClopenSet::SorgIv(a, b) => write!(f, "[{a},{b})"),
            ClopenSet::Minus(a, pts) => {
                write!(f, "{a}∖{{")?;
                for (i, p) in pts.iter().enumerate() {
                    if i > 0 {
                        write!(f, ",")?;
                    }
                    write!(f, "{p}")?;
                }
                write!(f, "}}")
            }
            ClopenSet::FinUnion(ms) => {
                write!(f, "(")?;
                for (i, m) in ms.iter().enumerate() {
                    if i > 0 {
                        write!(f, " ⊔ ")?;
                    }
                    write!(f, "{m}")?;
                }
                write!(f, ")")
            }
            ClopenSet::Box(m) => {
                write!(f, "Box{{")?;
                for (n, (i, s)) in m.iter().enumerate() {
                    if n > 0 {
                        write!(f, "; ")?;
                    }
                    write!(f, "{i}:{s}")?;
                }
                write!(f, "}}")
            }
            ClopenSet::Sel(fam, idx) => {
                write!(f, "Sel[{fam};k={};tau={:?};from={}]", idx.k, idx.tau, idx.from)
            }
        }
    }
}

/// Constants occurring in a set, grouped by coordinate for products.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct Constants {
    pub nat_max: Option<u64>,
    pub rats: BTreeSet<Q>,
    pub families: BTreeSet<FamilyRef>,
    pub coords: BTreeMap<usize, Constants>,
    pub tail: Option<Box<Constants>>,
}

impl Constants {
    pub fn nat(&mut self, n: u64) {
        self.nat_max = Some(self.nat_max.map_or(n, |m| m.max(n)));
    }

    pub fn merge(&mut self, other: &Constants) {
        if let Some(n) = other.nat_max {
            self.nat(n);
        }
        self.rats.extend(other.rats.iter().cloned());
        self.families.extend(other.families.iter().cloned());
        for (i, c) in &other.coords {
            self.coords.entry(*i).or_default().merge(c);
        }
        if let Some(t) = &other.tail {
            self.tail.get_or_insert_with(Default::default).merge(t);
        }
    }

    /// Constants relevant to coordinate `i` of a product.
    pub fn coord(&self, i: usize) -> Constants {
        let mut c = self.coords.get(&i).cloned().unwrap_or_default();
        if let Some(t) = &self.tail {
            c.merge(t);
        }
        c
    }

    pub fn add_point(&mut self, p: &Point) {
        match p {
            Point::Baire { prefix, tail } => {
                for &e in prefix {
                    self.nat(e);
                }
                self.nat(*tail);
            }
            Point::Sorg(x) => {
                self.rats.insert(x.clone());
            }
            Point::Product { explicit, tail } => {
                for (i, e) in explicit.iter().enumerate() {
                    self.coords.entry(i).or_default().add_point(e);
                }
                self.tail.get_or_insert_with(Default::default).add_point(tail);
            }
        }
    }

    pub fn add_set(&mut self, s: &ClopenSet) {
        match s {
            ClopenSet::Empty => {}
            ClopenSet::Cyl(v) => v.0.iter().for_each(|&e| self.nat(e)),
            ClopenSet::TailCyl(v, m) => {
                v.0.iter().for_each(|&e| self.nat(e));
                self.nat(*m);
            }
            ClopenSet::SorgIv(a, b) => {
                for e in [a, b] {
                    if let Ext::Fin(x) = e {
                        self.rats.insert(x.clone());
                    }
                }
            }
            ClopenSet::Minus(a, pts) => {
                self.add_set(a);
                pts.iter().for_each(|p| self.add_point(p));
            }
            ClopenSet::FinUnion(ms) => ms.iter().for_each(|m| self.add_set(m)),
            ClopenSet::Box(m) => {
                for (i, f) in m {
                    self.coords.entry(*i).or_default().add_set(f);
                }
            }
            ClopenSet::Sel(fam, _) => {
                self.families.insert(fam.clone());
                match fam {
                    FamilyRef::Std(v) => v.0.iter().for_each(|&e| self.nat(e)),
                    FamilyRef::SorgSub { lo, hi } => {
                        self.rats.insert(lo.clone());
                        self.rats.insert(hi.clone());
                    }
                    FamilyRef::SorgRoot => {}
                }
            }
        }
    }
}
