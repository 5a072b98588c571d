//! Foliage-tree invariants on a truncation.

use super::{Report, Tally};
use crate::error::Result;
use crate::path::NodePath;
use crate::symsets::{are_disjoint, equal, is_empty, is_subset, ClopenSet, Decision};
use crate::tree::{FoliageTree, SonFamily};
use rayon::prelude::*;
use serde_json::json;
use std::sync::Arc;

#[derive(Clone, Debug)]
pub struct BaireParams {
    pub depth: usize,
    /// Sons per node whose leaves are compared.
    pub sons: u64,
    /// Sons the walk descends into.
    pub walk: Vec<u64>,
}

impl BaireParams {
    pub fn new(depth: usize, sons: u64) -> BaireParams {
        let mut walk = vec![0, 1, sons.saturating_sub(1)];
        walk.retain(|s| *s < sons);
        walk.dedup();
        BaireParams { depth, sons, walk }
    }
}

impl BaireParams {
    /// Descends into every son below `branch`.
    pub fn branching(depth: usize, sons: u64, branch: u64) -> BaireParams {
        BaireParams { depth, sons, walk: (0..branch.min(sons)).collect() }
    }
}

impl Default for BaireParams {
    fn default() -> BaireParams {
        BaireParams::new(6, 32)
    }
}

const CHECKS: [(&str, &str); 7] = [
    ("omega-branching", "omega-branching"),
    ("cover", "local-strictness"),
    ("nonempty", "nonempty-leaves"),
    ("nonincreasing", "nonincreasing"),
    ("local-strictness", "local-strictness"),
    ("removed-points", "open-subspace"),
    ("strict-branch", "strict-branches"),
];

fn node_checks(tree: &dyn FoliageTree, v: &NodePath, leaf: &ClopenSet, sons: u64) -> Vec<Tally> {
    let mut t: Vec<Tally> = CHECKS.iter().map(|(c, k)| Tally::new(c, k)).collect();
    if let Err(e) = node_checks_inner(tree, v, leaf, sons, &mut t) {
        t[1].undecided(format!("{v}: {e}"));
    }
    t
}

fn node_checks_inner(
    tree: &dyn FoliageTree,
    v: &NodePath,
    leaf: &ClopenSet,
    sons: u64,
    t: &mut [Tally],
) -> Result<()> {
    let space = tree.space();
    let removed = tree.removed_points();
    let fam: Arc<dyn SonFamily> = tree.sons(v)?;
    match fam.finite_len() {
        None => t[0].pass(),
        Some(n) => t[0].fail(format!("{v} has {n} sons"), Some(json!({"node": v}))),
    }
    let r0 = fam.residual(0)?;
    t[1].decide(equal(&space, &r0, leaf)?, || format!("sons of {v} do not cover its leaf"), || Some(json!({"node": v})));
    for p in &removed {
        if r0.member(p)? {
            t[5].fail(format!("sons of {v} cover removed point {p}"), Some(json!({"node": v, "point": p})));
        } else {
            t[5].pass();
        }
    }
    let n = fam.finite_len().map_or(sons, |l| l.min(sons));
    let mut rest = r0;
    for i in 0..n {
        let l = fam.leaf(i)?;
        let next = fam.residual(i + 1)?;
        let w = || Some(json!({"node": v, "son": i}));
        t[2].decide(match is_empty(&space, &l)? {
            Decision::Yes => Decision::No,
            Decision::No => Decision::Yes,
            Decision::Unknown => Decision::Unknown,
        }, || format!("son {i} of {v} is empty"), w);
        let sub = is_subset(&space, &l, leaf)?;
        t[3].decide(sub, || format!("son {i} of {v} leaves its parent"), || {
            let pt = crate::symsets::point_in_difference(&space, &l, leaf).ok().flatten();
            Some(json!({"node": v, "son": i, "point": pt}))
        });
        let disj = are_disjoint(&space, &l, &next)?;
        t[4].decide(disj, || format!("son {i} of {v} overlaps a later son"), w);
        if disj == Decision::Yes {
            let joined = ClopenSet::union_disjoint(vec![l.clone(), next.clone()]);
            t[4].decide(equal(&space, &joined, &rest)?, || format!("son {i} of {v} and later sons miss part of residual {i}"), w);
        }
        for p in &removed {
            if l.member(p)? {
                t[5].fail(format!("son {i} of {v} contains removed point {p}"), Some(json!({"node": v, "son": i, "point": p})));
            }
        }
        rest = next;
    }
    let h = v.height() + 1;
    let bound = tree.separation_bound(h);
    for i in 0..n.min(3) {
        let c = v.child(i);
        let s = tree.separation(&c)?;
        if s.at_least(&bound) {
            t[6].pass();
        } else {
            t[6].fail(format!("{c} has separation {s}, bound {bound}"), Some(json!({"node": c})));
        }
    }
    Ok(())
}

/// Runs every invariant on the truncation to heights below `depth`, along
/// the walk.
pub fn baire_suite(tree: &dyn FoliageTree, params: &BaireParams) -> Result<Report> {
    log::info!("baire suite on {} to depth {}, {} sons", tree.name(), params.depth, params.sons);
    let space = tree.space();
    let mut report = Report::new("baire", tree.name());
    let mut root = Tally::new("root-leaf", "root-is-space");
    let full = ClopenSet::minus(ClopenSet::full(&space), tree.removed_points());
    root.decide(equal(&space, &tree.root_leaf(), &full)?, || "root leaf differs from the space".into(), || None);
    report.entries.push(root.finish());

    let mut totals: Vec<Tally> = CHECKS.iter().map(|(c, k)| Tally::new(c, k)).collect();
    let mut frontier: Vec<(NodePath, ClopenSet)> = vec![(NodePath::root(), tree.root_leaf())];
    // nodes of height below depth − 1 carry checked families
    for _ in 0..params.depth.saturating_sub(1) {
        let results: Vec<Vec<Tally>> =
            frontier.par_iter().map(|(v, l)| node_checks(tree, v, l, params.sons)).collect();
        for r in results {
            for (acc, t) in totals.iter_mut().zip(r) {
                acc.absorb(t);
            }
        }
        let mut next = Vec::new();
        for (v, _) in &frontier {
            let fam = tree.sons(v)?;
            for &s in &params.walk {
                if fam.finite_len().is_some_and(|n| s >= n) {
                    continue;
                }
                next.push((v.child(s), fam.leaf(s)?));
            }
        }
        log::debug!("next level: {} nodes", next.len());
        frontier = next;
    }
    report.entries.extend(totals.into_iter().map(Tally::finish));
    Ok(report)
}
