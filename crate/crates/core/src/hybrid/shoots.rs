//! Bounded check that a graft's shoots refine the host's shoots.

use super::lazy::{GNode, LazyGraft};
use crate::error::Result;
use crate::path::NodePath;
use crate::point::Point;
use crate::symsets::Decision;
use crate::tree::{family_shoot_refines, son_containing, FoliageTree, ShootDecision, SonFamily};
use serde::Serialize;
use std::sync::Arc;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ShootsWitness {
    pub point: Point,
    pub host_node: NodePath,
    /// A host residual index no graft shoot along the point gets inside.
    pub index: u64,
}

#[derive(Clone, Debug, Serialize)]
pub struct ShootsReport {
    pub decision: Decision,
    pub samples_used: usize,
    pub pairs_checked: usize,
    pub witness: Option<ShootsWitness>,
}

/// Graft families along `p`: the root and the local nodes it passes.
fn graft_scope(g: &dyn LazyGraft, p: &Point, depth: usize) -> Result<Vec<Arc<dyn SonFamily>>> {
    let mut out = Vec::new();
    let mut cur: Vec<u64> = Vec::new();
    for _ in 0..depth {
        let fam = g.family(&cur)?;
        let s = fam.locate(p)?;
        out.push(fam);
        let Some(s) = s else { break };
        match g.son(&cur, s)? {
            GNode::Inner(t) => cur = t,
            GNode::Max(_) => break,
        }
    }
    Ok(out)
}

/// Host nodes along `p` from the graft root through the explicit nodes.
fn host_scope(host: &dyn FoliageTree, g: &dyn LazyGraft, p: &Point, depth: usize) -> Result<Vec<NodePath>> {
    let mut y = g.root().clone();
    let mut out = vec![y.clone()];
    for _ in 0..depth {
        let c = y.child(son_containing(host, &y, p)?);
        if g.max_above(&c)?.is_some() {
            break;
        }
        out.push(c.clone());
        y = c;
    }
    Ok(out)
}

/// For every sample `p` in the graft root leaf and every host node `y` on
/// its path through the root or explicit nodes, looks for a graft node `x`
/// on its path whose shoot gets inside each of the first `probe` host
/// residuals of `y`.
pub fn preserves_shoots(
    host: &dyn FoliageTree,
    g: &dyn LazyGraft,
    samples: &[Point],
    depth: usize,
    probe: u64,
) -> Result<ShootsReport> {
    let space = host.space();
    let root_leaf = g.leaf(&[])?;
    let mut rep = ShootsReport { decision: Decision::Yes, samples_used: 0, pairs_checked: 0, witness: None };
    for p in samples {
        if !root_leaf.member(p)? {
            continue;
        }
        rep.samples_used += 1;
        let xs = graft_scope(g, p, depth)?;
        for y in host_scope(host, g, p, depth)? {
            rep.pairs_checked += 1;
            let fy = host.sons(&y)?;
            let mut unknown = false;
            let mut worst = 0;
            let mut good = false;
            for fx in &xs {
                let mut fail = None;
                for n in 0..probe {
                    match family_shoot_refines(&space, fx.as_ref(), &fy.residual(n)?)? {
                        ShootDecision::Yes { .. } => {}
                        ShootDecision::No => {
                            fail = Some(n);
                            break;
                        }
                        ShootDecision::Unknown => {
                            unknown = true;
                            fail = Some(u64::MAX);
                            break;
                        }
                    }
                }
                match fail {
                    None => {
                        good = true;
                        break;
                    }
                    Some(u64::MAX) => {}
                    Some(n) => worst = worst.max(n),
                }
            }
            if good {
                continue;
            }
            if unknown {
                rep.decision = Decision::Unknown;
            } else {
                rep.decision = Decision::No;
                rep.witness = Some(ShootsWitness { point: p.clone(), host_node: y, index: worst });
                return Ok(rep);
            }
        }
    }
    if rep.samples_used == 0 && rep.decision == Decision::Yes {
        rep.decision = Decision::Unknown;
    }
    Ok(rep)
}
