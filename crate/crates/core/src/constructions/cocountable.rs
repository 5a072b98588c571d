//! Trees on the complement of finitely many points.
//!
//! Point `p_i` is cut out by a two-level graft at the node `z_i` of the
//! current antichain `M_i` above it: the graft's sons are all sons of nodes
//! on the path of `p_i` from `z_i` that leave that path. Son `π(j, c)` of
//! the graft is the `c`-th son of `u_j` off the path, `u_0 = z_i` and
//! `u_{j+1}` the son of `u_j` containing `p_i`.

use crate::error::{Error, Result};
use crate::hybrid::{GNode, GraftSystem, Hybrid, HybridTree, LazyGraft};
use crate::path::NodePath;
use crate::point::Point;
use crate::symsets::cantor::{pair, unpair};
use crate::symsets::{is_subset, ClopenSet, Constants, Decision};
use crate::tree::{family_shoot_refines, son_containing, Canonical, RisePromise, ShootDecision, SonFamily, TreeRef};
use std::sync::{Arc, Mutex};

/// Levels followed along a removed point's path before giving up.
pub const PATH_CAP: usize = 256;

/// Levels searched for a path node whose leaf fits a set.
const FIT_CAP: usize = 64;

pub struct CocountableSystem {
    pub host: TreeRef,
    pub points: Vec<Point>,
    pub grafts: Vec<Arc<PointGraft>>,
}

pub type CocountableTree = HybridTree<CocountableSystem>;

pub fn cocountable_tree(host: TreeRef, points: Vec<Point>) -> Result<CocountableTree> {
    let space = host.space();
    let root = host.root_leaf();
    for (i, p) in points.iter().enumerate() {
        if points[..i].contains(p) {
            return Err(Error::DuplicatePoint(p.to_string()));
        }
        if !space.admits(p) {
            return Err(Error::SpaceMismatch(format!("{p} is not a point of {}", host.name())));
        }
        if !root.member(p)? {
            return Err(Error::PointOutsideRoot(p.to_string()));
        }
    }
    let mut grafts: Vec<Arc<PointGraft>> = Vec::new();
    for p in &points {
        let z = current_node(host.as_ref(), &grafts, p)?;
        grafts.push(Arc::new(PointGraft::new(host.clone(), z, p.clone())));
    }
    Ok(Canonical::new(Hybrid { sys: CocountableSystem { host, points, grafts } }))
}

/// The node of the antichain left by `grafts` whose leaf contains `q`.
pub fn current_node(host: &dyn crate::tree::FoliageTree, grafts: &[Arc<PointGraft>], q: &Point) -> Result<NodePath> {
    let mut x = NodePath::root();
    for g in grafts {
        if x == g.root {
            if &g.point == q {
                return Err(Error::DuplicatePoint(q.to_string()));
            }
            let (j, _) = g.chain.diverge(q)?;
            let u = g.chain.node(j)?;
            let m = u.child(son_containing(host, &u, q)?);
            x = m.child(son_containing(host, &m, q)?);
        }
    }
    Ok(x)
}

/// The path of a point below a start node, extended on demand.
pub struct Chain {
    host: TreeRef,
    start: NodePath,
    point: Point,
    /// `(s_j, sons of u_j)`, `u_0 = start` and `u_{j+1} = u_j⌢s_j`.
    levels: Mutex<Vec<(u64, Arc<dyn SonFamily>)>>,
}

impl Chain {
    pub fn new(host: TreeRef, start: NodePath, point: Point) -> Chain {
        Chain { host, start, point, levels: Mutex::new(Vec::new()) }
    }

    /// `(s_j, sons of u_j)`.
    pub fn step(&self, j: usize) -> Result<(u64, Arc<dyn SonFamily>)> {
        let mut levels = self.levels.lock().unwrap();
        while levels.len() <= j {
            if levels.len() >= PATH_CAP {
                return Err(Error::Unsupported(format!("path of {} deeper than {PATH_CAP}", self.point)));
            }
            let u = self.start.concat(&levels.iter().map(|l| l.0).collect::<Vec<_>>());
            let fam = self.host.sons(&u)?;
            let s = fam.locate(&self.point)?.ok_or_else(|| Error::PartitionViolation {
                node: u.clone(),
                detail: format!("no son contains {}", self.point),
            })?;
            levels.push((s, fam));
        }
        Ok(levels[j].clone())
    }

    /// `u_j`.
    pub fn node(&self, j: usize) -> Result<NodePath> {
        if j > 0 {
            self.step(j - 1)?;
        }
        let levels = self.levels.lock().unwrap();
        Ok(self.start.concat(&levels[..j].iter().map(|l| l.0).collect::<Vec<_>>()))
    }

    /// The first level `j` where `q` leaves the path, with the index of
    /// the son of `u_j` containing `q`.
    pub fn diverge(&self, q: &Point) -> Result<(usize, u64)> {
        for j in 0..PATH_CAP {
            let (s, fam) = self.step(j)?;
            let i = fam.locate(q)?.ok_or_else(|| Error::PointOutsideRoot(format!("{q} below {}", self.start)))?;
            if i != s {
                return Ok((j, i));
            }
        }
        Err(Error::Unsupported(format!("{q} follows {} for {PATH_CAP} levels", self.point)))
    }
}

/// Host index of the `c`-th son off the path at a node whose path son is `s`.
fn off_to_host(c: u64, s: u64) -> u64 {
    if c < s {
        c
    } else {
        c + 1
    }
}

/// The two-level graft removing `point` below `root`.
pub struct PointGraft {
    pub root: NodePath,
    pub point: Point,
    pub chain: Arc<Chain>,
    host: TreeRef,
}

impl PointGraft {
    pub fn new(host: TreeRef, root: NodePath, point: Point) -> PointGraft {
        let chain = Arc::new(Chain::new(host.clone(), root.clone(), point.clone()));
        PointGraft { root, point, chain, host }
    }

    /// The maximal node with index `c`.
    pub fn max_node(&self, c: u64) -> Result<NodePath> {
        let (j, c2) = unpair(c);
        let (s, _) = self.chain.step(j as usize)?;
        Ok(self.chain.node(j as usize)?.child(off_to_host(c2, s)))
    }
}

impl LazyGraft for PointGraft {
    fn root(&self) -> &NodePath {
        &self.root
    }

    fn son(&self, inner: &[u64], c: u64) -> Result<GNode> {
        if !inner.is_empty() {
            return Err(Error::InconsistentFamily(format!("graft at {} has no local nodes", self.root)));
        }
        Ok(GNode::Max(self.max_node(c)?))
    }

    fn family(&self, inner: &[u64]) -> Result<Arc<dyn SonFamily>> {
        if !inner.is_empty() {
            return Err(Error::InconsistentFamily(format!("graft at {} has no local nodes", self.root)));
        }
        Ok(Arc::new(OffPathFamily { chain: self.chain.clone(), leaf: self.leaf(&[])?, space: self.host.space() }))
    }

    fn leaf(&self, _inner: &[u64]) -> Result<ClopenSet> {
        Ok(ClopenSet::minus(self.host.leaf(&self.root)?, vec![self.point.clone()]))
    }

    fn cut(&self) -> Vec<Point> {
        vec![self.point.clone()]
    }

    fn max_above(&self, w: &NodePath) -> Result<Option<NodePath>> {
        if !self.root.is_below(w) {
            return Ok(None);
        }
        for j in 0..PATH_CAP {
            let u = self.chain.node(j)?;
            if &u == w {
                return Ok(None);
            }
            let (s, _) = self.chain.step(j)?;
            if w.entries()[u.height()] != s {
                return Ok(Some(w.truncate(u.height() + 1)));
            }
        }
        Err(Error::Unsupported(format!("{w} is deeper than {PATH_CAP} levels below {}", self.root)))
    }
}

/// Sons of the graft root: off-path sons of every path node.
pub struct OffPathFamily {
    chain: Arc<Chain>,
    leaf: ClopenSet,
    space: crate::space::Space,
}

enum Fit {
    From(u64),
    Never,
    Unknown,
}

impl OffPathFamily {
    fn point(&self) -> Vec<Point> {
        vec![self.chain.point.clone()]
    }

    /// Path leaf `F_{u_j} ∖ {p}`.
    fn path_leaf(&self, j: usize) -> Result<ClopenSet> {
        if j == 0 {
            return Ok(self.leaf.clone());
        }
        let (s, fam) = self.chain.step(j - 1)?;
        Ok(ClopenSet::minus(fam.leaf(s)?, self.point()))
    }

    /// Least `c` with every off-path son of `u_j` from `c` on inside `u`.
    fn fit(&self, j: usize, u: &ClopenSet) -> Result<Fit> {
        let (s, fam) = self.chain.step(j)?;
        let inside = |n: u64| -> Result<Decision> { is_subset(&self.space, &fam.leaf(n)?, u) };
        let a = match family_shoot_refines(&self.space, fam.as_ref(), u)? {
            ShootDecision::Yes { from } => from,
            ShootDecision::No => return Ok(Fit::Never),
            ShootDecision::Unknown => return Ok(Fit::Unknown),
        };
        if a <= s {
            return Ok(Fit::From(a));
        }
        if a > s + 1 {
            return Ok(Fit::From(a - 1));
        }
        let mut c = s;
        while c > 0 {
            match inside(c - 1)? {
                Decision::Yes => c -= 1,
                Decision::No => break,
                Decision::Unknown => return Ok(Fit::Unknown),
            }
        }
        Ok(Fit::From(c))
    }
}

/// Least `c` with `π(j, c) ≥ n`.
fn first_pair_at_least(j: u64, n: u64) -> u64 {
    let (mut lo, mut hi) = (0u64, n);
    while lo < hi {
        let mid = lo + (hi - lo) / 2;
        if pair(j, mid).is_some_and(|v| v >= n) {
            hi = mid;
        } else {
            lo = mid + 1;
        }
    }
    lo
}

impl SonFamily for OffPathFamily {
    fn leaf(&self, n: u64) -> Result<ClopenSet> {
        let (j, c) = unpair(n);
        let (s, fam) = self.chain.step(j as usize)?;
        fam.leaf(off_to_host(c, s))
    }

    fn residual(&self, n: u64) -> Result<ClopenSet> {
        if n == 0 {
            return Ok(self.leaf.clone());
        }
        // levels j with π(j, 0) < n still lose their first few sons
        let mut big_j = 0u64;
        while pair(big_j + 1, 0).is_some_and(|v| v < n) {
            big_j += 1;
        }
        let mut parts = Vec::new();
        for j in 0..=big_j {
            let c = first_pair_at_least(j, n);
            let (s, fam) = self.chain.step(j as usize)?;
            if c <= s {
                for i in c..s {
                    parts.push(fam.leaf(i)?);
                }
                parts.push(fam.residual(s + 1)?);
            } else {
                parts.push(fam.residual(c + 1)?);
            }
        }
        parts.push(self.path_leaf(big_j as usize + 1)?);
        Ok(ClopenSet::union_disjoint(parts))
    }

    fn locate(&self, q: &Point) -> Result<Option<u64>> {
        if q == &self.chain.point || !self.leaf.member(q)? {
            return Ok(None);
        }
        let (j, i) = self.chain.diverge(q)?;
        let (s, _) = self.chain.step(j)?;
        let c = if i < s { i } else { i - 1 };
        Ok(Some(pair(j as u64, c).ok_or_else(|| Error::Overflow(format!("pair({j}, {c})")))?))
    }

    fn index_hint(&self, _c: &Constants) -> Result<Option<u64>> {
        Ok(None)
    }

    /// Index whose residual decides whether some residual fits in `u`.
    fn shoot_threshold(&self, u: &ClopenSet) -> Result<Option<u64>> {
        let mut top = None;
        for j in 0..FIT_CAP {
            match is_subset(&self.space, &self.path_leaf(j)?, u)? {
                Decision::Yes => {
                    top = Some(j);
                    break;
                }
                Decision::Unknown => return Ok(None),
                Decision::No => {}
            }
        }
        let Some(top) = top else { return Ok(None) };
        let mut n = 0u64;
        for j in 0..top {
            match self.fit(j, u)? {
                Fit::From(0) => {}
                Fit::From(c) => {
                    let v = pair(j as u64, c - 1).ok_or_else(|| Error::Overflow("threshold".into()))?;
                    n = n.max(v + 1);
                }
                // residual 0 is not inside u since top > 0
                Fit::Never => return Ok(Some(0)),
                Fit::Unknown => return Ok(None),
            }
        }
        Ok(Some(n))
    }
}

impl CocountableSystem {
    /// The graft root `z_i`.
    pub fn z(&self, i: usize) -> &NodePath {
        &self.grafts[i].root
    }
}

impl GraftSystem for CocountableSystem {
    fn name(&self) -> String {
        format!("cocountable({}; {} points)", self.host.name(), self.points.len())
    }

    fn host(&self) -> &TreeRef {
        &self.host
    }

    fn graft_at(&self, v: &NodePath) -> Result<Option<Arc<dyn LazyGraft>>> {
        Ok(self.grafts.iter().find(|g| &g.root == v).map(|g| g.clone() as Arc<dyn LazyGraft>))
    }

    fn loss(&self) -> Vec<Point> {
        self.points.clone()
    }

    fn rise_promise(&self) -> RisePromise {
        if self.points.is_empty() {
            self.host.rise_promise()
        } else {
            RisePromise::OddTail
        }
    }
}
