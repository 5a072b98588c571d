use pitree::constructions::{
    cocountable_tree, rescale_tree, sorgenfrey_tree, standard_tree, theorem2_pipeline, Affine, FilterCert, Identity,
    OmegaSet, ShiftResult,
};
use pitree::constructions::shift::check_images_meet;
use pitree::hybrid::finite::{graft_violations, FinGraft, FinTree, NodeId};
use pitree::rational::{q, qf};
use pitree::symsets::{equal, is_empty};
use pitree::tree::{rise, scope, FoliageTree, TreeRef};
use pitree::{Arity, ClopenSet, Decision, Error, NodePath, Point};
use std::collections::BTreeSet;
use std::sync::Arc;

fn np(v: &[u64]) -> NodePath {
    NodePath::new(v.to_vec())
}

fn paths(branch: u64, depth: usize) -> Vec<NodePath> {
    let mut out = vec![NodePath::root()];
    let mut level = vec![NodePath::root()];
    for _ in 0..depth {
        level = level.iter().flat_map(|p| (0..branch).map(move |e| p.child(e))).collect();
        out.extend(level.clone());
    }
    out
}

fn s_tree() -> TreeRef {
    Arc::new(standard_tree())
}

fn sorg_tree() -> TreeRef {
    Arc::new(sorgenfrey_tree())
}

// shift

fn club_instance() -> ShiftResult {
    let c = FilterCert::cofinite_upto(8);
    ShiftResult::new(Arity::Finite(2), vec![c.clone(), c.clone()], vec![c.clone(), c]).unwrap()
}

#[test]
fn cofinite_shift_gives_affine_maps() {
    // f_i(n) = i, so h_i = 2i + 1 and β_n(l) = h_{n+l}
    let s = club_instance();
    for x in 0..40u64 {
        assert_eq!(s.alpha(0, x).unwrap(), 2 * x + 1);
        assert_eq!(s.alpha(1, x).unwrap(), 2 * x + 3);
    }
}

#[test]
fn shifted_images_meet_for_cofinite_instance() {
    let s = club_instance();
    assert_eq!(check_images_meet(&s, 1, 200, 3).unwrap(), None);
}

#[test]
fn shifted_images_meet_for_progression_instance() {
    let c = FilterCert::cofinite_upto(8);
    let g = FilterCert::progression_upto(3, 8).unwrap();
    let s = ShiftResult::new(Arity::Finite(2), vec![c.clone(), c.clone()], vec![c, g]).unwrap();
    assert_eq!(check_images_meet(&s, 1, 200, 3).unwrap(), None);
    assert_eq!(s.f_row(1, 12).unwrap(), vec![0, 3, 6, 9]);
}

#[test]
fn f_increases_and_alpha_maps_f_onto_h_tail() {
    let c = FilterCert::cofinite_upto(5);
    let g = FilterCert::progression_upto(2, 5).unwrap();
    let s = ShiftResult::new(Arity::Finite(3), vec![c.clone()], vec![c, g.clone(), g]).unwrap();
    for n in 0..3 {
        let row = s.f_row(n, 60).unwrap();
        assert!(row.windows(2).all(|w| w[0] < w[1]));
        for (l, x) in row.iter().enumerate() {
            assert_eq!(s.alpha(n, *x).unwrap() as i64, s.h((n + l) as i64).unwrap());
        }
        let vals: Vec<u64> = (0..60).map(|x| s.alpha(n, x).unwrap()).collect();
        assert!(vals.windows(2).all(|w| w[0] < w[1]));
    }
    // h_i − h_{i−1} exceeds every increment f_{i−j}(j) − f_{i−j−1}(j)
    for i in 0..20i64 {
        for j in 0..=(i.min(2)) {
            let inc = s.f(i - j, j as usize).unwrap() - s.f(i - j - 1, j as usize).unwrap();
            assert!(s.h(i).unwrap() > s.h(i - 1).unwrap() + inc);
        }
    }
}

#[test]
fn shift_rejects_finite_intersections_and_bad_refinement() {
    let fin = FilterCert::new(vec![OmegaSet::finite([1, 2, 3])]).unwrap();
    let c = FilterCert::cofinite_upto(3);
    assert!(matches!(
        ShiftResult::new(Arity::Finite(2), vec![fin, c.clone()], vec![c.clone(), c.clone()]),
        Err(Error::FipViolation(_))
    ));
    let evens = FilterCert::progression_upto(2, 0).unwrap();
    let odds = FilterCert::new(vec![OmegaSet::from_json(&serde_json::json!({"start": 0, "period": 2, "residues": [1]})).unwrap()]).unwrap();
    assert!(matches!(
        ShiftResult::new(Arity::Finite(2), vec![c.clone(), odds], vec![c, evens]),
        Err(Error::NotRefining(_))
    ));
}

#[test]
fn single_coordinate_shift_is_rejected() {
    let c = FilterCert::cofinite_upto(2);
    assert!(matches!(ShiftResult::new(Arity::Finite(1), vec![c.clone()], vec![c.clone(), c]), Err(Error::LambdaTooSmall)));
}

// rescale

#[test]
fn identity_rescale_keeps_leaves_and_heights() {
    for host in [s_tree(), sorg_tree()] {
        let h = rescale_tree(host.clone(), Arc::new(Identity)).unwrap();
        let sp = host.space();
        for v in paths(3, 4) {
            let l = h.label(&v).unwrap();
            assert_eq!(l.host, v);
            assert_eq!(l.height, v.height());
            assert_eq!(equal(&sp, &h.leaf(&v).unwrap(), &host.leaf(&v).unwrap()).unwrap(), Decision::Yes, "{v}");
        }
    }
}

#[test]
fn odd_affine_rescale_doubles_host_heights() {
    let host = s_tree();
    let h = rescale_tree(host.clone(), Arc::new(Affine::new(2, 1).unwrap())).unwrap();
    let sp = host.space();
    for v in paths(3, 6) {
        let l = h.label(&v).unwrap();
        assert!(l.inner.len() <= 1);
        if l.inner.is_empty() {
            // α(h − 1) + 1 with α(n) = 2n + 1
            assert_eq!(l.height, 2 * l.host.height(), "{v}");
            assert_eq!(equal(&sp, &h.leaf(&v).unwrap(), &host.leaf(&l.host).unwrap()).unwrap(), Decision::Yes);
        } else {
            assert_eq!(l.height, 2 * l.host.height() + 1);
        }
    }
}

#[test]
fn odd_affine_rescale_maps_rise_into_rise() {
    let host = s_tree();
    let alpha = Affine::new(2, 1).unwrap();
    let h = rescale_tree(host.clone(), Arc::new(Affine::new(2, 1).unwrap())).unwrap();
    let p = Point::baire(vec![], 0);
    let u = ClopenSet::cyl(np(&[0, 0]));
    let rf = rise(host.as_ref(), &p, &u, 4).unwrap();
    let rh = rise(&h, &p, &u, 8).unwrap();
    assert_eq!(rf.known, BTreeSet::from([2, 3]));
    use pitree::constructions::Alpha;
    for r in rf.known {
        assert!(rh.known.contains(&(alpha.eval(r as u64).unwrap() as usize)), "{r}");
    }
}

#[test]
fn rescale_rejects_non_increasing_table() {
    assert!(matches!(
        pitree::constructions::Table::new(vec![0, 2, 2], 1),
        Err(Error::AlphaNotIncreasing(_))
    ));
    assert!(matches!(Affine::new(0, 3), Err(Error::AlphaNotIncreasing(_))));
}

// cocountable

#[test]
fn no_points_leaves_tree_unchanged() {
    let host = sorg_tree();
    let h = cocountable_tree(host.clone(), vec![]).unwrap();
    for v in paths(3, 3) {
        assert_eq!(equal(&host.space(), &h.leaf(&v).unwrap(), &host.leaf(&v).unwrap()).unwrap(), Decision::Yes);
    }
}

#[test]
fn removing_zero_from_sorgenfrey_line() {
    let host = sorg_tree();
    let zero = Point::Sorg(q(0));
    let h = cocountable_tree(host.clone(), vec![zero.clone()]).unwrap();
    let sp = host.space();
    let root = h.sons(&NodePath::root()).unwrap();
    let line_minus = ClopenSet::minus(ClopenSet::sorg_line(), vec![zero.clone()]);
    assert_eq!(equal(&sp, &root.residual(0).unwrap(), &line_minus).unwrap(), Decision::Yes);
    for n in 0..12 {
        let joined = ClopenSet::union_disjoint(vec![root.leaf(n).unwrap(), root.residual(n + 1).unwrap()]);
        assert_eq!(equal(&sp, &joined, &root.residual(n).unwrap()).unwrap(), Decision::Yes, "{n}");
    }
    for v in paths(4, 3) {
        let l = h.leaf(&v).unwrap();
        assert!(!l.member(&zero).unwrap(), "{v}");
        assert_eq!(is_empty(&sp, &l).unwrap(), Decision::No, "{v}");
    }
}

#[test]
fn points_near_removed_point_get_odd_rise_heights() {
    let host = sorg_tree();
    let zero = Point::Sorg(q(0));
    let h = cocountable_tree(host.clone(), vec![zero.clone()]).unwrap();
    let p = Point::Sorg(qf(1, 3));
    let u = ClopenSet::sorg_iv(qf(1, 3), qf(7, 12));
    let d = 10;
    let hs = scope(&h, &p, d).unwrap();
    let rf = rise(host.as_ref(), &p, &u, 16).unwrap();
    let rh = rise(&h, &p, &ClopenSet::minus(u.clone(), vec![zero]), d).unwrap();
    let mut checked = 0;
    for n in 0..=3usize {
        if 2 * n + 1 >= d {
            break;
        }
        let f = h.label(&hs[2 * n + 1]).unwrap().host.height();
        if rf.known.contains(&f) {
            checked += 1;
            assert!(rh.known.contains(&(2 * n + 1)), "n = {n}");
        }
    }
    assert!(checked > 0);
}

#[test]
fn graft_roots_have_even_heights() {
    let host = sorg_tree();
    let pts: Vec<Point> = [qf(0, 1), qf(1, 2), qf(-3, 4), qf(1, 3), qf(5, 2)].into_iter().map(Point::Sorg).collect();
    let h = cocountable_tree(host, pts.clone()).unwrap();
    for i in 0..pts.len() {
        let z = h.inner.sys.z(i).clone();
        // walk the hybrid along a point of the graft root leaf
        let probe = pitree::symsets::find_point(&h.space(), &ClopenSet::minus(
            h.inner.sys.host.leaf(&z).unwrap(), pts.clone())).unwrap().unwrap();
        let s = scope(&h, &probe, 2 * z.height() + 2).unwrap();
        let hit = s.iter().find(|v| h.label(v).unwrap().host == z).expect("graft root is a hybrid node");
        assert_eq!(hit.height() % 2, 0, "z_{i} = {z}");
    }
}

#[test]
fn cocountable_rejects_duplicates_and_outside_points() {
    let host = sorg_tree();
    let z = Point::Sorg(q(0));
    assert!(matches!(cocountable_tree(host.clone(), vec![z.clone(), z.clone()]), Err(Error::DuplicatePoint(_))));
    let inner: TreeRef = Arc::new(cocountable_tree(host, vec![z.clone()]).unwrap());
    assert!(matches!(cocountable_tree(inner, vec![z]), Err(Error::PointOutsideRoot(_))));
}

#[test]
fn point_graft_truncation_is_a_graft() {
    // host: paths of S with entries < 3 up to length 3; p = 0^ω, graft at the root
    let host_paths: Vec<Vec<u64>> = paths(3, 3).into_iter().map(|p| p.0).collect();
    let host = FinTree::from_paths(host_paths);
    let mut t = FinTree::default();
    t.nodes.insert(NodeId::Host(vec![]));
    for j in 0..3usize {
        for c in 1..3u64 {
            let mut m = vec![0; j];
            m.push(c);
            t.nodes.insert(NodeId::Host(m.clone()));
            t.parent.insert(NodeId::Host(m), NodeId::Host(vec![]));
        }
    }
    assert!(graft_violations(&host, &FinGraft { tree: t }).is_empty());
}

// pipeline

#[test]
fn pipeline_needs_two_components() {
    assert!(matches!(
        theorem2_pipeline(vec![(sorg_tree(), FilterCert::cofinite_upto(3))]),
        Err(Error::LambdaTooSmall)
    ));
}

#[test]
fn pipeline_root_is_whole_product() {
    let p = theorem2_pipeline(vec![(sorg_tree(), FilterCert::cofinite_upto(8)), (s_tree(), FilterCert::cofinite_upto(8))])
        .unwrap();
    let sp = p.tree.space();
    assert_eq!(equal(&sp, &p.tree.root_leaf(), &ClopenSet::full(&sp)).unwrap(), Decision::Yes);
    assert_eq!(p.shift.alpha(0, 3).unwrap(), 7);
}
