//! Checks tied to individual constructions.

use super::grow::tail_status;
use super::samples::Sample;
use super::{Report, Tally};
use crate::constructions::alpha::alpha_at;
use crate::constructions::shift::check_images_meet;
use crate::constructions::{CocountableTree, FilterCert, Pipeline, ProductTree, RescaledTree, ShiftResult};
use crate::error::Result;
use crate::hybrid::finite::{hybr, hybr_oracle, hybrid_sons, random_instance, FinTree};
use crate::path::NodePath;
use crate::point::Point;
use crate::symsets::{are_disjoint, equal, find_point, ClopenSet};
use crate::tree::{rise, scope, son_containing, FoliageTree, TreeRef};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::json;
use std::collections::{BTreeMap, BTreeSet};

fn all_paths(len: usize, bound: u64) -> Vec<NodePath> {
    let mut level = vec![NodePath::root()];
    for _ in 0..len {
        level = level.iter().flat_map(|p| (0..bound).map(move |e| p.child(e))).collect();
    }
    level
}

fn boxed(parts: Vec<ClopenSet>) -> ClopenSet {
    ClopenSet::boxed_from(parts.into_iter().enumerate())
}

/// The index-family decomposition of odd product nodes: for an even node
/// `v` of level `n ≤ max_n` and `m ≤ max_m`, the box of residuals from `m`
/// splits into the box from `m + 1` and the leaf of `v⌢m`, whose sons are
/// the boxes of the next index family.
pub fn box_decomposition_check(
    tree: &ProductTree,
    max_n: usize,
    max_m: u64,
    entry_bound: u64,
    pieces: u64,
) -> Result<Report> {
    let space = tree.space();
    let sys = &tree.inner;
    let mut report = Report::new("box-decomposition", tree.name());
    let mut split = Tally::new("box-split", "box-decomposition");
    let mut sons = Tally::new("box-sons", "box-decomposition");
    let mut index = Tally::new("index-family", "box-decomposition");
    for n in 0..=max_n {
        for v in all_paths(2 * n, entry_bound) {
            let a = tree.index_family(&v)?;
            let fams = a.iter().enumerate().map(|(i, ai)| sys.component(i).sons(ai)).collect::<Result<Vec<_>>>()?;
            let tail_box = |m: u64| -> Result<ClopenSet> { Ok(boxed(fams.iter().map(|f| f.residual(m)).collect::<Result<_>>()?)) };
            for m in 0..=max_m {
                let w = v.child(m);
                let odd = tree.leaf(&w)?;
                let (here, next) = (tail_box(m)?, tail_box(m + 1)?);
                let wit = || Some(json!({"node": v, "m": m}));
                let disj = are_disjoint(&space, &odd, &next)?;
                split.decide(disj, || format!("leaf of {w} meets the box from {}", m + 1), wit);
                let joined = ClopenSet::union_disjoint(vec![odd.clone(), next]);
                split.decide(equal(&space, &joined, &here)?, || format!("box from {m} at {v} is not split by {w}"), wit);

                let fam = tree.sons(&w)?;
                let mut parts = Vec::new();
                for l in 0..pieces {
                    let u = w.child(l);
                    let b = tree.index_family(&u)?;
                    let expect = boxed(b.iter().enumerate().map(|(i, bi)| sys.component(i).leaf(bi)).collect::<Result<_>>()?);
                    let leaf = fam.leaf(l)?;
                    sons.decide(equal(&space, &leaf, &expect)?, || format!("leaf of {u} is not the box of its index family"), || {
                        Some(json!({"node": u, "index": b}))
                    });
                    parts.push(leaf);
                    let ok = b.len() == space_touched(tree, n + 1)
                        && b.iter().enumerate().all(|(i, bi)| match a.get(i) {
                            Some(ai) => bi.parent().is_some_and(|(p, e)| &p == ai && e >= m),
                            None => bi.height() == n + 1,
                        });
                    if ok {
                        index.pass();
                    } else {
                        index.fail(format!("index family of {u} does not extend that of {v}"), Some(json!({"node": u, "from": a, "to": b})));
                    }
                }
                parts.push(fam.residual(pieces)?);
                let cover = ClopenSet::union_disjoint(parts);
                sons.decide(equal(&space, &cover, &odd)?, || format!("sons of {w} do not cover its leaf"), wit);
            }
        }
    }
    report.entries.extend([split.finish(), sons.finish(), index.finish()]);
    Ok(report)
}

fn space_touched(tree: &ProductTree, n: usize) -> usize {
    tree.inner.arity.touched(n)
}

/// Shifted filter images meet in at least `need` points below `bound`.
pub fn shift_check(s: &ShiftResult, max_k: usize, bound: u64, need: usize) -> Result<Report> {
    let mut report = Report::new("shift", "filter shift");
    let mut t = Tally::new("shift-intersection", "shift-intersection");
    match check_images_meet(s, max_k, bound, need)? {
        None => t.pass(),
        Some(short) => t.fail(
            format!("images of members {:?} share {} points below {bound}", short.choice, short.common.len()),
            Some(json!({"choice": short.choice, "common": short.common})),
        ),
    }
    report.entries.push(t.finish());
    Ok(report)
}

/// Heights and rise sets of a rescaled tree against its host.
pub fn rescale_checks(h: &RescaledTree, d: usize, bound: u64, samples: &[Sample], host_depth: usize) -> Result<Report> {
    let host = h.inner.sys.host.clone();
    let alpha = h.inner.sys.alpha.clone();
    let space = host.space();
    let mut report = Report::new("rescale", h.name());
    let mut heights = Tally::new("height-shift", "height-shift");
    for len in 0..=d {
        for v in all_paths(len, bound) {
            let l = h.label(&v)?;
            if !l.inner.is_empty() {
                continue;
            }
            let want = (alpha_at(alpha.as_ref(), l.host.height() as i64 - 1)? + 1) as usize;
            let w = || Some(json!({"node": v, "host": l.host}));
            if v.height() != want || l.height != want {
                heights.fail(format!("{v} carries host node {} at height {}, expected {want}", l.host, v.height()), w());
                continue;
            }
            heights.decide(equal(&space, &h.leaf(&v)?, &host.leaf(&l.host)?)?, || format!("leaf of {v} differs from host leaf"), w);
        }
    }
    let mut image = Tally::new("rise-image", "rise-image");
    let hd = (alpha_at(alpha.as_ref(), host_depth as i64 - 1)? + 1) as usize;
    for (i, s) in samples.iter().enumerate() {
        let rf = rise(host.as_ref(), &s.point, &s.nbhd, host_depth)?;
        let rh = rise(h, &s.point, &s.nbhd, hd)?;
        for &r in &rf.known {
            let a = alpha.eval(r as u64)? as usize;
            if rh.known.contains(&a) {
                image.pass();
            } else if rh.undecided.contains(&a) {
                image.undecided(format!("sample {i}: height {a} undecided"));
            } else {
                image.fail(
                    format!("sample {i}: host rise height {r} maps to {a}, outside the stretched rise"),
                    Some(json!({"sample": i, "point": s.point, "host_height": r, "image": a})),
                );
            }
        }
    }
    report.entries.extend([heights.finish(), image.finish()]);
    Ok(report)
}

enum Piece {
    Node(NodePath),
    Rest(ClopenSet),
}

/// Expansion bounds for the stage antichains of a cocountable tree.
#[derive(Clone, Copy, Debug)]
pub struct StageBounds {
    /// Chain levels expanded per removed point.
    pub levels: usize,
    /// Sons listed per expanded node.
    pub width: u64,
}

impl Default for StageBounds {
    fn default() -> StageBounds {
        StageBounds { levels: 3, width: 4 }
    }
}

/// Stage partitions, even heights of stage nodes, and odd rise heights of a
/// cocountable tree.
pub fn cocountable_checks(h: &CocountableTree, samples: &[Sample], d: usize, bounds: StageBounds) -> Result<Report> {
    let sys = &h.inner.sys;
    let host = sys.host.clone();
    let space = host.space();
    let pts = sys.points.clone();
    let mut report = Report::new("cocountable", h.name());
    let mut stage = Tally::new("stage-partition", "stage-partition");
    let mut even = Tally::new("even-heights", "even-heights");
    let leaf_of = |p: &Piece| -> Result<ClopenSet> {
        match p {
            Piece::Node(u) => host.leaf(u),
            Piece::Rest(s) => Ok(s.clone()),
        }
    };
    let mut pieces = vec![Piece::Node(NodePath::root())];
    let mut seen = BTreeSet::new();
    for i in 0..=pts.len() {
        let union = ClopenSet::union_disjoint(pieces.iter().map(&leaf_of).collect::<Result<_>>()?);
        let rest = ClopenSet::minus(ClopenSet::full(&space), pts[..i].to_vec());
        stage.decide(equal(&space, &union, &rest)?, || format!("stage {i} does not cover the space minus earlier points"), || {
            Some(json!({"stage": i}))
        });
        for p in &pieces {
            if let Piece::Node(u) = p {
                if seen.insert(u.clone()) {
                    even_height(h, &pts, u, &mut even)?;
                }
            }
        }
        if i == pts.len() {
            break;
        }
        let z = sys.z(i).clone();
        let (p, pos) = (&pts[i], pieces.iter().position(|x| matches!(x, Piece::Node(u) if *u == z)));
        let Some(pos) = pos else {
            stage.undecided(format!("z_{i} = {z} lies beyond the expanded stage"));
            break;
        };
        if !host.leaf(&z)?.member(p)? {
            stage.fail(format!("z_{i} = {z} does not contain {p}"), Some(json!({"stage": i, "node": z})));
            break;
        }
        pieces.remove(pos);
        let fresh = expand(host.as_ref(), &z, p, bounds)?;
        let sets: Vec<ClopenSet> = fresh.iter().map(&leaf_of).collect::<Result<_>>()?;
        for a in 0..sets.len() {
            for b in a + 1..sets.len() {
                stage.decide(are_disjoint(&space, &sets[a], &sets[b])?, || format!("stage {} pieces {a} and {b} overlap", i + 1), || {
                    Some(json!({"stage": i + 1, "pieces": [a, b]}))
                });
            }
        }
        let whole = ClopenSet::minus(host.leaf(&z)?, vec![p.clone()]);
        stage.decide(equal(&space, &ClopenSet::union_disjoint(sets), &whole)?, || format!("stage {} does not split z_{i}", i + 1), || {
            Some(json!({"stage": i + 1, "node": z}))
        });
        pieces.extend(fresh);
    }

    let mut odd = Tally::new("odd-rise", "odd-rise");
    let mut tail = Tally::new("odd-tail", "odd-tail");
    for (k, s) in samples.iter().enumerate() {
        let u = ClopenSet::minus(s.nbhd.clone(), pts.clone());
        let hs = scope(h, &s.point, d)?;
        let rh = rise(h, &s.point, &u, d)?;
        let mut f = Vec::new();
        for n in 0..d.div_ceil(2) {
            if 2 * n + 1 >= d {
                break;
            }
            let l = h.label(&hs[2 * n + 1])?;
            if !l.inner.is_empty() {
                odd.fail(format!("sample {k}: scope node at height {} is not a host node", 2 * n + 1), None);
            }
            f.push(l.host.height());
        }
        let fd = f.iter().max().map_or(1, |m| m + 1);
        let rf = rise(host.as_ref(), &s.point, &s.nbhd, fd)?;
        for (n, fp) in f.iter().enumerate() {
            if !rf.known.contains(fp) {
                continue;
            }
            let hh = 2 * n + 1;
            if rh.known.contains(&hh) {
                odd.pass();
            } else if rh.undecided.contains(&hh) {
                odd.undecided(format!("sample {k}: height {hh} undecided"));
            } else {
                odd.fail(
                    format!("sample {k}: host height {fp} rises but hybrid height {hh} does not"),
                    Some(json!({"sample": k, "point": s.point, "n": n, "host_height": fp})),
                );
            }
        }
        match tail_status(&rh, |n| n % 2 == 1) {
            Some(true) => tail.pass(),
            None => tail.undecided(format!("sample {k}: last odd height undecided")),
            Some(false) => tail.fail(format!("sample {k}: rise {rh} misses the last odd height"), Some(json!({"sample": k, "point": s.point}))),
        }
    }
    report.entries.extend([stage.finish(), even.finish(), odd.finish(), tail.finish()]);
    Ok(report)
}

/// Pieces replacing `z` once `p` is removed: the sons of the off-chain
/// siblings along the scope of `p`, the unlisted sons, and the chain's end.
fn expand(host: &dyn FoliageTree, z: &NodePath, p: &Point, b: StageBounds) -> Result<Vec<Piece>> {
    let mut out = Vec::new();
    let mut node = z.clone();
    for _ in 0..b.levels {
        let fam = host.sons(&node)?;
        let s = son_containing(host, &node, p)?;
        let width = b.width.max(s + 1);
        for c in (0..width).filter(|&c| c != s) {
            let m = node.child(c);
            let sub = host.sons(&m)?;
            for e in 0..b.width {
                out.push(Piece::Node(m.child(e)));
            }
            out.push(Piece::Rest(sub.residual(b.width)?));
        }
        out.push(Piece::Rest(fam.residual(width)?));
        node = node.child(s);
    }
    out.push(Piece::Rest(ClopenSet::minus(host.leaf(&node)?, vec![p.clone()])));
    Ok(out)
}

fn even_height(h: &CocountableTree, pts: &[Point], u: &NodePath, t: &mut Tally) -> Result<()> {
    let space = h.space();
    let region = ClopenSet::minus(h.inner.sys.host.leaf(u)?, pts.to_vec());
    let Some(probe) = find_point(&space, &region)? else {
        t.undecided(format!("no probe point in {u}"));
        return Ok(());
    };
    let s = scope(h, &probe, 2 * u.height() + 3)?;
    let mut hit = None;
    for v in &s {
        let l = h.label(v)?;
        if &l.host == u && l.inner.is_empty() {
            hit = Some(v.clone());
            break;
        }
    }
    match hit {
        Some(v) if v.height() % 2 == 0 => t.pass(),
        Some(v) => t.fail(format!("stage node {u} sits at odd height {}", v.height()), Some(json!({"node": u, "hybrid": v}))),
        None => t.fail(format!("stage node {u} is not a node of the hybrid"), Some(json!({"node": u}))),
    }
    Ok(())
}

fn tree_edges(t: &FinTree) -> BTreeMap<String, String> {
    t.parent.iter().map(|(c, p)| (format!("{c:?}"), format!("{p:?}"))).collect()
}

/// Random finite instances: parent rewiring against the closure of the
/// union of orders, and sons against the graft-or-host rule.
pub fn hybrid_oracle_suite(seed: u64, instances: usize, max_nodes: usize, max_grafts: usize) -> Report {
    let mut report = Report::new("hybrid-oracle", format!("{instances} random instances"));
    let mut nodes_t = Tally::new("hybrid-nodes", "hybrid-closure");
    let mut order_t = Tally::new("hybrid-order", "hybrid-closure");
    let mut edges_t = Tally::new("hybrid-edges", "hybrid-closure");
    let mut sons_t = Tally::new("hybrid-sons", "hybrid-sons");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for k in 0..instances {
        let (host, grafts) = random_instance(&mut rng, max_nodes, max_grafts);
        let out = match hybr(&host, &grafts) {
            Ok(t) => t,
            Err(e) => {
                nodes_t.fail(format!("instance {k}: {e}"), Some(json!({"instance": k})));
                continue;
            }
        };
        let (nodes, order) = hybr_oracle(&host, &grafts);
        let w = || Some(json!({"instance": k, "seed": seed}));
        if out.nodes == nodes {
            nodes_t.pass();
        } else {
            nodes_t.fail(format!("instance {k}: node sets differ"), w());
        }
        if out.order() == order {
            order_t.pass();
        } else {
            order_t.fail(format!("instance {k}: orders differ"), w());
        }
        // covering pairs of the oracle order
        let mut cover = FinTree { nodes: nodes.clone(), parent: BTreeMap::new() };
        for (a, b) in &order {
            let direct = !order.iter().any(|(x, y)| x == a && y != b && order.contains(&(y.clone(), b.clone())));
            if direct {
                cover.parent.insert(b.clone(), a.clone());
            }
        }
        if tree_edges(&out) == tree_edges(&cover) {
            edges_t.pass();
        } else {
            edges_t.fail(format!("instance {k}: parent edges differ"), w());
        }
        for x in &out.nodes {
            let want = hybrid_sons(&host, &grafts, x);
            if out.sons(x) == want {
                sons_t.pass();
            } else {
                sons_t.fail(format!("instance {k}: sons of {x:?} differ"), Some(json!({"instance": k, "node": format!("{x:?}")})));
            }
        }
    }
    report.entries.extend([nodes_t.finish(), order_t.finish(), edges_t.finish(), sons_t.finish()]);
    report
}

/// Product invariants, shifted-image intersections, and a bounded check
/// that some member of each certificate lies in the component's rise sets.
pub fn theorem2_checks(
    components: &[(TreeRef, FilterCert)],
    pipe: &Pipeline,
    params: &super::BaireParams,
    samples_per: usize,
    seed: u64,
    rise_depth: usize,
) -> Result<Report> {
    let mut report = Report::new("theorem2", pipe.tree.name());
    report.merge(super::baire_suite(pipe.tree.as_ref(), params)?);
    report.merge(shift_check(&pipe.shift, components.len() - 1, 200, 3)?);
    let mut t = Tally::new("certificate-rise", "filter-refines-rise");
    for (i, (c, cert)) in components.iter().enumerate() {
        let samples = super::samples::default_samples(&c.space(), &c.removed_points(), samples_per, seed + i as u64);
        for (k, s) in samples.iter().enumerate() {
            let r = rise(c.as_ref(), &s.point, &s.nbhd, rise_depth)?;
            let fits = |strict: bool| {
                cert.sets.iter().any(|g| {
                    g.below(rise_depth as u64)
                        .all(|x| r.known.contains(&(x as usize)) || (!strict && r.undecided.contains(&(x as usize))))
                })
            };
            if fits(true) {
                t.pass();
            } else if fits(false) {
                t.undecided(format!("component {i} sample {k}: fit needs undecided heights"));
            } else {
                t.fail(
                    format!("component {i} sample {k}: no certificate member inside rise {r}"),
                    Some(json!({"component": i, "point": s.point, "nbhd": s.nbhd.to_json()})),
                );
            }
        }
    }
    report.entries.push(t.finish());
    Ok(report)
}
