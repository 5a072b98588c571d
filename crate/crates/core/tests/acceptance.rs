//! Desk-scale acceptance run. Prints one line per criterion.

use pitree::constructions::{
    cocountable_tree, fault_tree, product_tree, rescale_tree, sorgenfrey_tree, standard_tree, strip_removals, Affine,
    FaultKind, FilterCert, Identity, ProductTree, ShiftResult,
};
use pitree::rational::qf;
use pitree::tree::{materialize, rise, FoliageTree, TreeRef};
use pitree::verify::samples::default_samples;
use pitree::verify::*;
use pitree::{Arity, ClopenSet, NodePath, Point};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::collections::BTreeSet;
use std::sync::Arc;
use std::time::{Duration, Instant};

type Outcome = Result<(), String>;

fn s_tree() -> TreeRef {
    Arc::new(standard_tree())
}

fn sorg_tree() -> TreeRef {
    Arc::new(sorgenfrey_tree())
}

fn np(v: &[u64]) -> NodePath {
    NodePath::new(v.to_vec())
}

fn all_pass(r: &Report) -> Outcome {
    match r.entries.iter().find(|e| e.status != Status::Pass) {
        None => Ok(()),
        Some(e) => Err(format!("{} {} [{}] {:?}: {}", r.subject, e.check, e.clause, e.status, e.detail)),
    }
}

fn within(start: Instant, limit: Duration) -> Outcome {
    let took = start.elapsed();
    if took < limit {
        Ok(())
    } else {
        Err(format!("took {took:.2?}, limit {limit:?}"))
    }
}

fn paths(len: usize, bound: u64) -> Vec<NodePath> {
    let mut level = vec![NodePath::root()];
    for _ in 0..len {
        level = level.iter().flat_map(|p| (0..bound).map(move |e| p.child(e))).collect();
    }
    level
}

fn rise_identity() -> Outcome {
    let t0 = Instant::now();
    let t = standard_tree();
    let p = Point::baire(vec![], 0);
    for n in 0..=3usize {
        let u = ClopenSet::cyl(np(&vec![0; n]));
        let r = rise(&t, &p, &u, 8).map_err(|e| e.to_string())?;
        let want: BTreeSet<usize> = (n..8).collect();
        if r.known != want || !r.undecided.is_empty() {
            return Err(format!("n = {n}: got {r}"));
        }
    }
    within(t0, Duration::from_secs(1))
}

fn baire_six_trees() -> Outcome {
    let t0 = Instant::now();
    let arc = |p: ProductTree| -> TreeRef { Arc::new(p) };
    let trees: Vec<TreeRef> = vec![
        s_tree(),
        sorg_tree(),
        arc(product_tree(Arity::Finite(2), vec![s_tree(), s_tree()]).unwrap()),
        arc(product_tree(Arity::Finite(2), vec![sorg_tree(), sorg_tree()]).unwrap()),
        arc(product_tree(Arity::Finite(3), vec![sorg_tree(), sorg_tree(), s_tree()]).unwrap()),
        arc(product_tree(Arity::Omega, vec![sorg_tree()]).unwrap()),
    ];
    for t in &trees {
        let s = Instant::now();
        let r = baire_suite(t.as_ref(), &BaireParams::new(6, 32)).map_err(|e| e.to_string())?;
        all_pass(&r)?;
        let sep = r.entry("strict-branch").ok_or("no strict-branch entry")?;
        if sep.checked == 0 {
            return Err(format!("{}: strict-branch checked nothing", t.name()));
        }
        eprintln!("    {} in {:.2?}", t.name(), s.elapsed());
    }
    within(t0, Duration::from_secs(30))
}

/// `x` extends `a` and its entry right after `a` is at least `m`.
fn in_tail(x: &Point, a: &NodePath, m: u64) -> bool {
    let e = a.entries();
    e.iter().enumerate().all(|(j, &v)| x.at(j) == Some(v)) && x.at(e.len()).is_some_and(|v| v >= m)
}

fn in_cyl(x: &Point, b: &NodePath) -> bool {
    b.entries().iter().enumerate().all(|(j, &v)| x.at(j) == Some(v))
}

/// Every Baire point whose first `len` entries are below `base`, tail 0.
fn prefixes(len: usize, base: u64) -> Vec<Point> {
    let mut out = vec![vec![]];
    for _ in 0..len {
        out = out.into_iter().flat_map(|p: Vec<u64>| (0..base).map(move |e| [p.clone(), vec![e]].concat())).collect();
    }
    out.into_iter().map(|p| Point::baire(p, 0)).collect()
}

/// Product points over per-coordinate prefix grids. Grids whose product
/// exceeds `cap` keep one point per oracle signature in each coordinate.
fn grid(lens: &[usize], k: usize, cap: usize, sig: impl Fn(usize, &Point) -> Vec<bool>) -> Vec<Point> {
    let full: usize = (0..k).map(|i| 4usize.pow(lens.get(i).copied().unwrap_or(0) as u32)).product();
    let mut out: Vec<Vec<Point>> = vec![vec![]];
    for i in 0..k {
        let mut coord = prefixes(lens.get(i).copied().unwrap_or(0), 4);
        if full > cap {
            let mut seen = BTreeSet::new();
            coord.retain(|x| seen.insert(sig(i, x)));
        }
        out = out.into_iter().flat_map(|p| coord.iter().map(move |c| [p.clone(), vec![c.clone()]].concat())).collect();
    }
    out.into_iter().map(|c| Point::product(c, Point::baire(vec![], 0))).collect()
}

fn box_oracle(t: &ProductTree, k: usize) -> Outcome {
    let pieces = 4;
    let mut points = 0usize;
    for n in 0..=2 {
        for v in paths(2 * n, 3) {
            let a = t.index_family(&v).map_err(|e| e.to_string())?;
            for m in 0..=3 {
                let w = v.child(m);
                let odd = t.leaf(&w).map_err(|e| e.to_string())?;
                let fam = t.sons(&w).map_err(|e| e.to_string())?;
                let sons: Vec<(ClopenSet, Vec<NodePath>)> = (0..pieces)
                    .map(|l| Ok((fam.leaf(l)?, t.index_family(&w.child(l))?)))
                    .collect::<pitree::Result<_>>()
                    .map_err(|e| e.to_string())?;
                let rest = fam.residual(pieces).map_err(|e| e.to_string())?;
                let lens: Vec<usize> = sons[0].1.iter().map(NodePath::height).collect();
                let here = |x: &Point, m: u64| a.iter().enumerate().all(|(i, ai)| in_tail(x.coord(i).unwrap(), ai, m));
                let sig = |i: usize, x: &Point| -> Vec<bool> {
                    let mut s: Vec<bool> = a.get(i).map_or(vec![], |ai| vec![in_tail(x, ai, m), in_tail(x, ai, m + 1)]);
                    s.extend(sons.iter().map(|(_, b)| b.get(i).is_some_and(|bi| in_cyl(x, bi))));
                    s
                };
                for x in grid(&lens, k, 20_000, sig) {
                    points += 1;
                    let want = here(&x, m) && !here(&x, m + 1);
                    let got = odd.member(&x).map_err(|e| e.to_string())?;
                    if got != want {
                        return Err(format!("Λ={k} leaf of {w} at {x}: {got}, oracle {want}"));
                    }
                    let mut hits = 0;
                    for (l, (leaf, b)) in sons.iter().enumerate() {
                        let boxed = b.iter().enumerate().all(|(i, bi)| in_cyl(x.coord(i).unwrap(), bi));
                        let inside = leaf.member(&x).map_err(|e| e.to_string())?;
                        if inside != boxed {
                            return Err(format!("Λ={k} son {l} of {w} at {x}: {inside}, oracle {boxed}"));
                        }
                        hits += inside as usize;
                    }
                    hits += rest.member(&x).map_err(|e| e.to_string())? as usize;
                    if hits != want as usize {
                        return Err(format!("Λ={k} sons of {w} cover {x} {hits} times"));
                    }
                }
            }
        }
    }
    eprintln!("    Λ={k}: {points} point checks");
    Ok(())
}

fn index_family_identity() -> Outcome {
    let t0 = Instant::now();
    for k in [2, 3] {
        let t = product_tree(Arity::Finite(k), vec![s_tree()]).unwrap();
        all_pass(&box_decomposition_check(&t, 2, 3, 3, 6).map_err(|e| e.to_string())?)?;
        box_oracle(&t, k)?;
    }
    within(t0, Duration::from_secs(10))
}

fn meets(s: &ShiftResult, need: usize) -> Outcome {
    let images: Vec<Vec<BTreeSet<u64>>> = (0..2)
        .map(|n| s.delta(n).iter().map(|d| s.image_below(n, d, 200)).collect::<pitree::Result<_>>())
        .collect::<pitree::Result<_>>()
        .map_err(|e| e.to_string())?;
    for (i, a) in images[0].iter().enumerate() {
        for (j, b) in images[1].iter().enumerate() {
            let c = a.intersection(b).count();
            if c < need {
                return Err(format!("members {i}, {j} share {c} points below 200"));
            }
        }
    }
    Ok(())
}

fn filter_shift() -> Outcome {
    let t0 = Instant::now();
    let c = FilterCert::cofinite_upto(8);
    let g = FilterCert::progression_upto(3, 8).map_err(|e| e.to_string())?;
    for gamma in [c.clone(), g] {
        let s = ShiftResult::new(Arity::Finite(2), vec![c.clone(), c.clone()], vec![c.clone(), gamma]).map_err(|e| e.to_string())?;
        all_pass(&shift_check(&s, 1, 200, 3).map_err(|e| e.to_string())?)?;
        meets(&s, 3)?;
    }
    within(t0, Duration::from_secs(1))
}

fn rescale() -> Outcome {
    let t0 = Instant::now();
    for host in [s_tree(), sorg_tree()] {
        let samples = default_samples(&host.space(), &[], 10, 21);
        for h in [
            rescale_tree(host.clone(), Arc::new(Identity)).unwrap(),
            rescale_tree(host.clone(), Arc::new(Affine::new(2, 1).unwrap())).unwrap(),
        ] {
            all_pass(&rescale_checks(&h, 6, 3, &samples, 6).map_err(|e| e.to_string())?)?;
        }
    }
    within(t0, Duration::from_secs(10))
}

fn cocountable() -> Outcome {
    let t0 = Instant::now();
    let pts: Vec<Point> = [qf(0, 1), qf(1, 2), qf(-3, 4), qf(1, 3), qf(5, 2)].into_iter().map(Point::Sorg).collect();
    let h = cocountable_tree(sorg_tree(), pts.clone()).map_err(|e| e.to_string())?;
    let samples = default_samples(&h.space(), &pts, 10, 4);
    let r = cocountable_checks(&h, &samples, 10, StageBounds::default()).map_err(|e| e.to_string())?;
    all_pass(&r)?;
    for c in ["stage-partition", "even-heights", "odd-rise", "odd-tail"] {
        if r.entry(c).map_or(0, |e| e.checked) == 0 {
            return Err(format!("{c} checked nothing"));
        }
    }
    // removed points lie in no leaf
    for rec in materialize(&h, 4, 6).map_err(|e| e.to_string())? {
        for p in &pts {
            if rec.leaf.member(p).map_err(|e| e.to_string())? {
                return Err(format!("leaf of {} keeps {p}", rec.path));
            }
        }
    }
    within(t0, Duration::from_secs(10))
}

fn hybrid_oracle() -> Outcome {
    let t0 = Instant::now();
    let r = hybrid_oracle_suite(2024, 100, 60, 3);
    all_pass(&r)?;
    within(t0, Duration::from_secs(10))
}

fn fault_injection() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let pts: Vec<Point> = [qf(0, 1), qf(1, 2), qf(-3, 4), qf(1, 3), qf(5, 2)].into_iter().map(Point::Sorg).collect();
    let co = Arc::new(cocountable_tree(sorg_tree(), pts).unwrap());
    let bases: Vec<TreeRef> = vec![s_tree(), sorg_tree(), Arc::new(product_tree(Arity::Finite(2), vec![s_tree(), s_tree()]).unwrap())];
    let params = BaireParams::branching(4, 8, 3);
    let mut cases: Vec<(TreeRef, FaultKind, NodePath, u64)> = Vec::new();
    for i in 0..15 {
        let base = bases[i % bases.len()].clone();
        let len = rng.gen_range(1..=2);
        let at = NodePath::new((0..len).map(|_| rng.gen_range(0..3)).collect::<Vec<u64>>());
        let kind = if i % 2 == 0 { FaultKind::Overlap } else { FaultKind::Escape };
        cases.push((base, kind, at, rng.gen_range(0..4)));
    }
    // nodes whose sons actually carry a removal
    let mut keep = Vec::new();
    for len in 0..=2 {
        for at in paths(len, 8) {
            let fam = co.sons(&at).map_err(|e| e.to_string())?;
            let mut hit = false;
            for l in 0..8 {
                let leaf = strip_removals(&fam.leaf(l).map_err(|e| e.to_string())?);
                for p in &co.inner.sys.points {
                    hit |= leaf.member(p).map_err(|e| e.to_string())?;
                }
            }
            if hit {
                keep.push(at);
            }
        }
    }
    if keep.len() < 5 {
        return Err(format!("only {} keep-point sites", keep.len()));
    }
    for at in keep.into_iter().take(5) {
        cases.push((co.clone(), FaultKind::KeepPoint, at, 0));
    }
    let mut false_passes = Vec::new();
    let wide = BaireParams::branching(4, 8, 8);
    for (base, kind, at, son) in &cases {
        let t = fault_tree(base.clone(), *kind, at.clone(), *son).map_err(|e| e.to_string())?;
        let p = if *kind == FaultKind::KeepPoint { &wide } else { &params };
        let r = baire_suite(&t, p).map_err(|e| e.to_string())?;
        let want: &[&str] = match kind {
            FaultKind::Overlap => &["local-strictness", "cover"],
            FaultKind::Escape => &["nonincreasing"],
            FaultKind::KeepPoint => &["removed-points"],
        };
        let caught = r.failures().iter().any(|e| e.witness.is_some() && want.contains(&e.check.as_str()));
        if !caught {
            false_passes.push(format!("{kind:?} at {at} son {son} on {}", base.name()));
        }
    }
    if cases.len() != 20 {
        return Err(format!("{} cases", cases.len()));
    }
    if false_passes.is_empty() {
        Ok(())
    } else {
        Err(format!("{} false passes: {}", false_passes.len(), false_passes.join("; ")))
    }
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 8] = [
        ("rise identity", rise_identity),
        ("baire suite on six trees", baire_six_trees),
        ("index-family identity", index_family_identity),
        ("filter shift", filter_shift),
        ("rescale", rescale),
        ("co-countable", cocountable),
        ("hybrid oracle", hybrid_oracle),
        ("fault injection", fault_injection),
    ];
    let mut failed = Vec::new();
    for (i, (name, run)) in criteria.iter().enumerate() {
        let t0 = Instant::now();
        let out = run();
        match &out {
            Ok(()) => println!("criterion {} {name}: PASS ({:.2?})", i + 1, t0.elapsed()),
            Err(e) => {
                println!("criterion {} {name}: FAIL ({:.2?}) {e}", i + 1, t0.elapsed());
                failed.push(i + 1);
            }
        }
    }
    if !failed.is_empty() {
        println!("failed criteria: {failed:?}");
        std::process::exit(1);
    }
}
