//! Grafts and hybrids of finite trees.
//!
//! Host nodes are named by their paths; nodes a graft adds are named by
//! the graft's id and a local number.

use rand::Rng;
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum NodeId {
    Host(Vec<u64>),
    Local(usize, u32),
}

impl fmt::Display for NodeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            NodeId::Host(v) => write!(f, "{v:?}"),
            NodeId::Local(g, k) => write!(f, "g{g}.{k}"),
        }
    }
}

/// A finite rooted tree given by parent links.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct FinTree {
    pub nodes: BTreeSet<NodeId>,
    pub parent: BTreeMap<NodeId, NodeId>,
}

impl FinTree {
    /// The tree of host paths closed under prefixes.
    pub fn from_paths(paths: impl IntoIterator<Item = Vec<u64>>) -> FinTree {
        let mut t = FinTree::default();
        t.nodes.insert(NodeId::Host(Vec::new()));
        for p in paths {
            for k in 1..=p.len() {
                let (a, b) = (NodeId::Host(p[..k].to_vec()), NodeId::Host(p[..k - 1].to_vec()));
                t.nodes.insert(a.clone());
                t.parent.insert(a, b);
            }
        }
        t
    }

    pub fn roots(&self) -> Vec<&NodeId> {
        self.nodes.iter().filter(|x| !self.parent.contains_key(*x)).collect()
    }

    pub fn root(&self) -> Option<&NodeId> {
        let r = self.roots();
        (r.len() == 1).then(|| r[0])
    }

    pub fn sons(&self, x: &NodeId) -> BTreeSet<NodeId> {
        self.parent.iter().filter(|(_, p)| *p == x).map(|(c, _)| c.clone()).collect()
    }

    pub fn maximal(&self) -> BTreeSet<NodeId> {
        let inner: BTreeSet<&NodeId> = self.parent.values().collect();
        self.nodes.iter().filter(|x| !inner.contains(x)).cloned().collect()
    }

    /// Strict ancestors of `x`, nearest first; `None` on a cycle.
    pub fn ancestors(&self, x: &NodeId) -> Option<Vec<NodeId>> {
        let mut out = Vec::new();
        let mut cur = x;
        while let Some(p) = self.parent.get(cur) {
            if out.len() > self.nodes.len() {
                return None;
            }
            out.push(p.clone());
            cur = p;
        }
        Some(out)
    }

    /// `x < y`.
    pub fn less(&self, x: &NodeId, y: &NodeId) -> bool {
        self.ancestors(y).is_some_and(|a| a.contains(x))
    }

    pub fn leq(&self, x: &NodeId, y: &NodeId) -> bool {
        x == y || self.less(x, y)
    }

    /// All pairs `(x, y)` with `x < y`.
    pub fn order(&self) -> BTreeSet<(NodeId, NodeId)> {
        let mut out = BTreeSet::new();
        for y in &self.nodes {
            for x in self.ancestors(y).unwrap_or_default() {
                out.insert((x, y.clone()));
            }
        }
        out
    }
}

/// A graft: a finite tree whose root and maximal nodes are host nodes.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FinGraft {
    pub tree: FinTree,
}

impl FinGraft {
    pub fn root(&self) -> Option<&NodeId> {
        self.tree.root()
    }

    pub fn maxel(&self) -> BTreeSet<NodeId> {
        self.tree.maximal()
    }

    /// Nodes strictly between the root and the maximal nodes.
    pub fn implicit(&self) -> BTreeSet<NodeId> {
        let m = self.maxel();
        let r = self.root().cloned();
        self.tree.nodes.iter().filter(|x| !m.contains(*x) && Some(*x) != r.as_ref()).cloned().collect()
    }

    /// Host nodes strictly above the root not at or above a maximal node.
    pub fn explicit(&self, host: &FinTree) -> BTreeSet<NodeId> {
        let Some(r) = self.root() else { return BTreeSet::new() };
        let m = self.maxel();
        host.nodes
            .iter()
            .filter(|x| host.less(r, x) && !m.iter().any(|mm| host.leq(mm, x)))
            .cloned()
            .collect()
    }
}

/// Violated graft conditions, empty when `g` is a graft for `host`.
pub fn graft_violations(host: &FinTree, g: &FinGraft) -> Vec<String> {
    let mut out = Vec::new();
    let t = &g.tree;
    if t.nodes.len() < 2 {
        out.push("graft has fewer than two nodes".into());
    }
    let root = match t.roots().as_slice() {
        [r] => Some((*r).clone()),
        _ => {
            out.push("graft has no least node".into());
            None
        }
    };
    if t.nodes.iter().any(|x| t.ancestors(x).is_none()) || t.parent.keys().any(|k| !t.nodes.contains(k)) {
        out.push("graft order is not a tree".into());
    }
    let mut shared: BTreeSet<NodeId> = t.maximal();
    if let Some(r) = &root {
        shared.insert(r.clone());
    }
    let meet: BTreeSet<NodeId> = t.nodes.intersection(&host.nodes).cloned().collect();
    if meet != shared {
        out.push(format!("graft meets host in {} nodes, not root plus maximal nodes", meet.len()));
    }
    for x in &shared {
        for y in &shared {
            if x != y && t.less(x, y) != host.less(x, y) {
                out.push(format!("order of {x} and {y} differs from host"));
            }
        }
    }
    out
}

/// Checks that `grafts` form a consistent family for `host`.
pub fn consistency(host: &FinTree, grafts: &[FinGraft]) -> Result<(), String> {
    for (i, g) in grafts.iter().enumerate() {
        let v = graft_violations(host, g);
        if !v.is_empty() {
            return Err(format!("graft {i}: {}", v.join("; ")));
        }
    }
    for i in 0..grafts.len() {
        for j in 0..grafts.len() {
            if i == j {
                continue;
            }
            let (d, e) = (&grafts[i], &grafts[j]);
            if j > i && !d.implicit().is_disjoint(&e.implicit()) {
                return Err(format!("grafts {i} and {j} share implicit nodes"));
            }
            let (rd, re) = (d.root().unwrap(), e.root().unwrap());
            if j > i && rd == re {
                return Err(format!("grafts {i} and {j} share a root"));
            }
            if host.less(re, rd) && !e.maxel().iter().any(|m| host.leq(m, rd)) {
                return Err(format!("root of graft {i} is explicit in graft {j}"));
            }
        }
    }
    Ok(())
}

/// Host nodes that survive every graft.
pub fn support(host: &FinTree, grafts: &[FinGraft]) -> BTreeSet<NodeId> {
    let mut gone = BTreeSet::new();
    for g in grafts {
        gone.extend(g.explicit(host));
    }
    host.nodes.difference(&gone).cloned().collect()
}

/// The hybrid tree: support plus implicit nodes, each node hung from its
/// graft parent when it has one and from its host parent otherwise.
pub fn hybr(host: &FinTree, grafts: &[FinGraft]) -> Result<FinTree, String> {
    consistency(host, grafts)?;
    let mut out = FinTree { nodes: support(host, grafts), parent: BTreeMap::new() };
    let mut from_graft: BTreeMap<NodeId, NodeId> = BTreeMap::new();
    for g in grafts {
        out.nodes.extend(g.implicit());
        for (c, p) in &g.tree.parent {
            from_graft.insert(c.clone(), p.clone());
        }
    }
    for x in &out.nodes {
        let p = match from_graft.get(x) {
            Some(p) => Some(p.clone()),
            None => host.parent.get(x).cloned(),
        };
        if let Some(p) = p {
            out.parent.insert(x.clone(), p);
        }
    }
    Ok(out)
}

/// Expected sons of `x` in the hybrid: graft sons at graft nodes, host sons
/// elsewhere.
pub fn hybrid_sons(host: &FinTree, grafts: &[FinGraft], x: &NodeId) -> BTreeSet<NodeId> {
    for g in grafts {
        if g.root() == Some(x) || g.implicit().contains(x) {
            return g.tree.sons(x);
        }
    }
    host.sons(x)
}

/// Hybrid order by brute force: restrict the union of all orders to the
/// hybrid's nodes and close transitively.
pub fn hybr_oracle(host: &FinTree, grafts: &[FinGraft]) -> (BTreeSet<NodeId>, BTreeSet<(NodeId, NodeId)>) {
    let nodes = {
        let mut n = support(host, grafts);
        for g in grafts {
            n.extend(g.implicit());
        }
        n
    };
    let mut rel: BTreeSet<(NodeId, NodeId)> = host.order();
    for g in grafts {
        rel.extend(g.tree.order());
    }
    rel.retain(|(a, b)| nodes.contains(a) && nodes.contains(b));
    loop {
        let mut add = Vec::new();
        for (a, b) in &rel {
            for (c, d) in rel.range((b.clone(), NodeId::Host(Vec::new()))..) {
                if c != b {
                    break;
                }
                if !rel.contains(&(a.clone(), d.clone())) {
                    add.push((a.clone(), d.clone()));
                }
            }
        }
        if add.is_empty() {
            break;
        }
        rel.extend(add);
    }
    (nodes, rel)
}

/// A random host tree with at most `max_nodes` nodes and a consistent
/// family of at most `max_grafts` grafts.
pub fn random_instance<R: Rng>(rng: &mut R, max_nodes: usize, max_grafts: usize) -> (FinTree, Vec<FinGraft>) {
    let mut paths: Vec<Vec<u64>> = vec![Vec::new()];
    let target = rng.gen_range(2..=max_nodes.max(2));
    while paths.len() < target {
        let p = paths[rng.gen_range(0..paths.len())].clone();
        if p.len() >= 6 {
            continue;
        }
        let mut c = p.clone();
        c.push((0..).find(|k| !paths.contains(&[p.as_slice(), &[*k]].concat())).unwrap());
        paths.push(c);
    }
    let host = FinTree::from_paths(paths.clone());
    let mut grafts: Vec<FinGraft> = Vec::new();
    let wanted = rng.gen_range(0..=max_grafts);
    let mut tries = 0;
    while grafts.len() < wanted && tries < 200 {
        tries += 1;
        let gid = grafts.len();
        let r = &paths[rng.gen_range(0..paths.len())];
        let rid = NodeId::Host(r.clone());
        let below: Vec<&Vec<u64>> = paths.iter().filter(|p| p.len() > r.len() && p.starts_with(r)).collect();
        if below.is_empty() {
            continue;
        }
        let mut maxel: Vec<Vec<u64>> = Vec::new();
        for p in below {
            if rng.gen_bool(0.4) && maxel.iter().all(|m| !p.starts_with(m) && !m.starts_with(p)) {
                maxel.push(p.clone());
            }
        }
        if maxel.is_empty() {
            continue;
        }
        let mut tree = FinTree::default();
        tree.nodes.insert(rid.clone());
        let mut locals: Vec<NodeId> = vec![rid.clone()];
        let n_local = rng.gen_range(0..=3u32);
        for k in 0..n_local {
            let id = NodeId::Local(gid, k);
            let p = locals[rng.gen_range(0..locals.len())].clone();
            tree.nodes.insert(id.clone());
            tree.parent.insert(id.clone(), p);
            locals.push(id);
        }
        for m in &maxel {
            let id = NodeId::Host(m.clone());
            tree.nodes.insert(id.clone());
            tree.parent.insert(id, locals[rng.gen_range(0..locals.len())].clone());
        }
        // locals without sons would become maximal non-host nodes
        let mut dangling: Vec<NodeId> = tree.maximal().into_iter().filter(|x| matches!(x, NodeId::Local(..))).collect();
        while let Some(x) = dangling.pop() {
            let p = tree.parent.remove(&x).unwrap();
            tree.nodes.remove(&x);
            if matches!(p, NodeId::Local(..)) && tree.sons(&p).is_empty() {
                dangling.push(p);
            }
        }
        let g = FinGraft { tree };
        let mut trial = grafts.clone();
        trial.push(g);
        if consistency(&host, &trial).is_ok() {
            grafts = trial;
        }
    }
    (host, grafts)
}
