//! Lazy foliage trees on the canonical skeleton and the notions derived from
//! them: scope, shoot refinement and rise.

mod canonical;
mod pieces;

pub use canonical::{canonicalize, Canonical, LabeledTree, PathLabels};
pub use pieces::{piece_hint, LossFamily, PieceFamily};

use crate::error::{Error, Result};
use crate::path::NodePath;
use crate::point::Point;
use crate::rational::{fmt_q, Q};
use crate::space::Space;
use crate::symsets::{is_empty, is_subset, ClopenSet, Constants, Decision, FamilyRef};
use serde::{Deserialize, Serialize};
use std::collections::BTreeSet;
use std::fmt;
use std::sync::Arc;

/// The ω-indexed family of a node's son leaves.
pub trait SonFamily: Send + Sync {
    fn leaf(&self, n: u64) -> Result<ClopenSet>;

    /// Union of the leaves with index `n` or more.
    fn residual(&self, n: u64) -> Result<ClopenSet>;

    /// Index of the son whose leaf should contain `p`.
    fn locate(&self, p: &Point) -> Result<Option<u64>>;

    /// `Some(len)` for a finite family.
    fn finite_len(&self) -> Option<u64> {
        None
    }

    /// The family as pieces of a standard family minus a finite point set.
    fn family_ref(&self) -> Option<(FamilyRef, Vec<Point>)> {
        None
    }

    /// An index past which all sons look alike to sets built from `c`.
    fn index_hint(&self, _c: &Constants) -> Result<Option<u64>> {
        Ok(None)
    }

    /// Index `N` such that if any residual lies inside `u`, `residual(N)` does.
    fn shoot_threshold(&self, u: &ClopenSet) -> Result<Option<u64>> {
        self.index_hint(&u.constants())
    }

    /// The index at or above `n` where a residual is cheapest to build.
    fn cheap_index(&self, n: u64) -> u64 {
        n
    }
}

/// Separation of a leaf, used as the finite proxy for strict branches.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum Separation {
    /// Width of the hull of a Sorgenfrey leaf; `None` when unbounded.
    Width(#[serde(serialize_with = "ser_width")] Option<Q>),
    /// Length of the prefix shared by every member.
    Prefix(u64),
    /// Determined prefix per touched coordinate.
    Coords(Vec<u64>),
}

fn ser_width<S: serde::Serializer>(w: &Option<Q>, s: S) -> std::result::Result<S::Ok, S::Error> {
    match w {
        Some(x) => s.serialize_str(&fmt_q(x)),
        None => s.serialize_str("inf"),
    }
}

impl Separation {
    /// Whether `self` is at least as fine as `other`.
    pub fn at_least(&self, other: &Separation) -> bool {
        match (self, other) {
            (Separation::Width(a), Separation::Width(b)) => match (a, b) {
                (_, None) => true,
                (None, Some(_)) => false,
                (Some(x), Some(y)) => x <= y,
            },
            (Separation::Prefix(a), Separation::Prefix(b)) => a >= b,
            (Separation::Coords(a), Separation::Coords(b)) => {
                a.len() >= b.len() && a.iter().zip(b).all(|(x, y)| x >= y)
            }
            _ => false,
        }
    }
}

impl fmt::Display for Separation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Separation::Width(Some(w)) => write!(f, "width {}", fmt_q(w)),
            Separation::Width(None) => write!(f, "width inf"),
            Separation::Prefix(n) => write!(f, "prefix {n}"),
            Separation::Coords(v) => write!(f, "prefixes {v:?}"),
        }
    }
}

/// What a construction promises about its rise sets.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum RisePromise {
    None,
    /// Every rise set contains a tail of ω.
    Cofinite,
    /// Every rise set contains a tail of the odd numbers.
    OddTail,
}

/// A lazily generated foliage tree on `^{<ω}ω`.
pub trait FoliageTree: Send + Sync {
    fn name(&self) -> String;

    fn space(&self) -> Space;

    fn root_leaf(&self) -> ClopenSet {
        ClopenSet::minus(ClopenSet::full(&self.space()), self.removed_points())
    }

    /// Points of the ambient space the tree's flesh leaves out.
    fn removed_points(&self) -> Vec<Point> {
        Vec::new()
    }

    fn sons(&self, v: &NodePath) -> Result<Arc<dyn SonFamily>>;

    fn leaf(&self, v: &NodePath) -> Result<ClopenSet> {
        match v.parent() {
            None => Ok(self.root_leaf()),
            Some((par, n)) => self.sons(&par)?.leaf(n),
        }
    }

    fn separation(&self, v: &NodePath) -> Result<Separation>;

    /// Separation every node of height `d` is expected to reach.
    fn separation_bound(&self, d: usize) -> Separation;

    fn rise_promise(&self) -> RisePromise {
        RisePromise::None
    }

    /// An index `H` such that, at every node of height below `depth`, the
    /// sons with index `H` or more look alike to sets built from `c`.
    fn uniform_hint(&self, _c: &Constants, _depth: usize) -> Result<Option<u64>> {
        Ok(None)
    }
}

pub type TreeRef = Arc<dyn FoliageTree>;

impl<T: FoliageTree + ?Sized> FoliageTree for Arc<T> {
    fn name(&self) -> String {
        (**self).name()
    }
    fn space(&self) -> Space {
        (**self).space()
    }
    fn root_leaf(&self) -> ClopenSet {
        (**self).root_leaf()
    }
    fn removed_points(&self) -> Vec<Point> {
        (**self).removed_points()
    }
    fn sons(&self, v: &NodePath) -> Result<Arc<dyn SonFamily>> {
        (**self).sons(v)
    }
    fn leaf(&self, v: &NodePath) -> Result<ClopenSet> {
        (**self).leaf(v)
    }
    fn separation(&self, v: &NodePath) -> Result<Separation> {
        (**self).separation(v)
    }
    fn separation_bound(&self, d: usize) -> Separation {
        (**self).separation_bound(d)
    }
    fn rise_promise(&self) -> RisePromise {
        (**self).rise_promise()
    }
    fn uniform_hint(&self, c: &Constants, depth: usize) -> Result<Option<u64>> {
        (**self).uniform_hint(c, depth)
    }
}

/// Sons checked explicitly when confirming that a located son is unique.
const UNIQUE_CHECK: u64 = 32;

/// The son of `v` containing `p`, with its uniqueness checked on leaves below
/// the located index (up to a bound) and on the residual above it.
pub fn son_containing(tree: &dyn FoliageTree, v: &NodePath, p: &Point) -> Result<u64> {
    let fam = tree.sons(v)?;
    let violation = |detail: String| Error::PartitionViolation { node: v.clone(), detail };
    let Some(n) = fam.locate(p)? else {
        return Err(violation(format!("no son contains {p}")));
    };
    if !fam.leaf(n)?.member(p)? {
        return Err(violation(format!("no son contains {p}")));
    }
    for j in 0..n.min(UNIQUE_CHECK) {
        if fam.leaf(j)?.member(p)? {
            return Err(violation(format!("sons {j} and {n} both contain {p}")));
        }
    }
    if fam.finite_len().is_none_or(|len| n + 1 < len) && fam.residual(n + 1)?.member(p)? {
        return Err(violation(format!("son {n} and a later son both contain {p}")));
    }
    Ok(n)
}

/// The nodes of heights `0..d` whose leaves contain `p`.
pub fn scope(tree: &dyn FoliageTree, p: &Point, d: usize) -> Result<Vec<NodePath>> {
    if !tree.space().admits(p) {
        return Err(Error::SpaceMismatch(format!("{p} is not a point of {}", tree.name())));
    }
    if !tree.root_leaf().member(p)? {
        return Err(Error::PointOutsideRoot(p.to_string()));
    }
    let mut out = Vec::with_capacity(d);
    let mut v = NodePath::root();
    for h in 0..d {
        out.push(v.clone());
        if h + 1 < d {
            let n = son_containing(tree, &v, p)?;
            v = v.child(n);
        }
    }
    Ok(out)
}

/// Outcome of a shoot refinement test.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum ShootDecision {
    /// Every son with index `from` or more lies inside the set.
    Yes { from: u64 },
    No,
    Unknown,
}

impl ShootDecision {
    pub fn is_yes(&self) -> bool {
        matches!(self, ShootDecision::Yes { .. })
    }
}

/// Largest exponent tried when no threshold is known.
const SEARCH_EXP: u32 = 12;

/// Whether some cofinite set of sons of `v` has nonempty union inside `u`.
pub fn shoot_refines(tree: &dyn FoliageTree, v: &NodePath, u: &ClopenSet) -> Result<ShootDecision> {
    family_shoot_refines(&tree.space(), tree.sons(v)?.as_ref(), u)
}

/// Whether some cofinite subfamily of `fam` has nonempty union inside `u`.
pub fn family_shoot_refines(space: &Space, fam: &dyn SonFamily, u: &ClopenSet) -> Result<ShootDecision> {
    let inside = |n: u64| -> Result<Decision> {
        let r = fam.residual(n)?;
        if is_empty(space, &r)? == Decision::Yes {
            return Ok(Decision::No);
        }
        is_subset(space, &r, u)
    };
    if let Some(len) = fam.finite_len() {
        // a finite family: any single nonempty leaf inside u is a witness
        for n in (0..len).rev() {
            match inside(n)? {
                Decision::Yes => {
                    let mut from = n;
                    while from > 0 && inside(from - 1)? == Decision::Yes {
                        from -= 1;
                    }
                    return Ok(ShootDecision::Yes { from });
                }
                Decision::Unknown => return Ok(ShootDecision::Unknown),
                Decision::No => {}
            }
        }
        return Ok(ShootDecision::No);
    }
    let top = match fam.shoot_threshold(u)? {
        Some(t) => {
            let t = fam.cheap_index(t);
            match inside(t)? {
                Decision::Yes => t,
                Decision::No => return Ok(ShootDecision::No),
                Decision::Unknown => return Ok(ShootDecision::Unknown),
            }
        }
        None => {
            let mut found = None;
            for e in 0..=SEARCH_EXP {
                let t = fam.cheap_index(if e == 0 { 0 } else { 1u64 << e });
                if inside(t)? == Decision::Yes {
                    found = Some(t);
                    break;
                }
            }
            match found {
                Some(t) => t,
                None => return Ok(ShootDecision::Unknown),
            }
        }
    };
    // smallest cheap index whose residual lies inside u
    let (mut best, mut lo, mut up) = (top, 0, top);
    while lo < up {
        let mid = lo + (up - lo) / 2;
        let c = fam.cheap_index(mid);
        if c >= up {
            up = mid;
        } else if inside(c)? == Decision::Yes {
            best = c;
            up = c;
        } else {
            lo = c + 1;
        }
    }
    Ok(ShootDecision::Yes { from: best })
}

/// A rise set truncated at depth `bound`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RiseSet {
    pub known: BTreeSet<usize>,
    /// Heights whose shoot test was undecided.
    pub undecided: BTreeSet<usize>,
    pub bound: usize,
}

impl RiseSet {
    /// `Some(b)` for heights below the bound, `None` beyond it.
    pub fn contains(&self, n: usize) -> Option<bool> {
        (n < self.bound && !self.undecided.contains(&n)).then(|| self.known.contains(&n))
    }

    /// Smallest `m` with `[m, bound)` inside the known part, if that tail is
    /// nonempty.
    pub fn tail_start(&self) -> Option<usize> {
        let mut m = self.bound;
        while m > 0 && self.known.contains(&(m - 1)) {
            m -= 1;
        }
        (m < self.bound).then_some(m)
    }
}

impl fmt::Display for RiseSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let ks: Vec<String> = self.known.iter().map(|k| k.to_string()).collect();
        write!(f, "{{{}}} (unknown beyond {})", ks.join(","), self.bound)?;
        if !self.undecided.is_empty() {
            let us: Vec<String> = self.undecided.iter().map(|k| k.to_string()).collect();
            write!(f, ", undecided {{{}}}", us.join(","))?;
        }
        Ok(())
    }
}

/// Heights `n < d` of scope nodes of `p` whose shoot refines `{u}`.
pub fn rise(tree: &dyn FoliageTree, p: &Point, u: &ClopenSet, d: usize) -> Result<RiseSet> {
    let nodes = scope(tree, p, d)?;
    let mut known = BTreeSet::new();
    let mut undecided = BTreeSet::new();
    for (h, v) in nodes.iter().enumerate() {
        match shoot_refines(tree, v, u)? {
            ShootDecision::Yes { .. } => {
                known.insert(h);
            }
            ShootDecision::No => {}
            ShootDecision::Unknown => {
                undecided.insert(h);
            }
        }
    }
    Ok(RiseSet { known, undecided, bound: d })
}

/// A node of a truncated materialization.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct NodeRecord {
    pub path: NodePath,
    pub height: usize,
    pub leaf: ClopenSet,
}

/// Nodes of height below `d` with every entry below `sons`, in breadth-first order.
pub fn materialize(tree: &dyn FoliageTree, d: usize, sons: u64) -> Result<Vec<NodeRecord>> {
    let mut out = vec![NodeRecord { path: NodePath::root(), height: 0, leaf: tree.root_leaf() }];
    let mut frontier = vec![NodePath::root()];
    for h in 1..d {
        let mut next = Vec::new();
        for v in &frontier {
            let fam = tree.sons(v)?;
            let n = fam.finite_len().map_or(sons, |l| l.min(sons));
            for i in 0..n {
                let c = v.child(i);
                out.push(NodeRecord { path: c.clone(), height: h, leaf: fam.leaf(i)? });
                next.push(c);
            }
        }
        frontier = next;
    }
    Ok(out)
}

/// Separation of a Sorgenfrey interval leaf.
pub fn interval_width(s: &ClopenSet) -> Option<Q> {
    use crate::rational::Ext;
    match s {
        ClopenSet::SorgIv(Ext::Fin(a), Ext::Fin(b)) => Some(b - a),
        ClopenSet::Minus(a, _) => interval_width(a),
        _ => None,
    }
}
