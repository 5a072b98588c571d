use pitree::constructions::{product_tree, sorgenfrey_tree, standard_tree};
use pitree::rational::{pow2_neg, q, qf, Q};
use pitree::symsets::{are_disjoint, equal, is_subset};
use pitree::tree::{
    canonicalize, materialize, rise, scope, shoot_refines, FoliageTree, PathLabels, RiseSet, ShootDecision,
    TreeRef,
};
use pitree::{Arity, ClopenSet, Decision, Error, NodePath, Point, Space};
use proptest::prelude::*;
use std::collections::BTreeSet;
use std::sync::Arc;

fn p(v: &[u64]) -> NodePath {
    NodePath::new(v.to_vec())
}

fn zero() -> Point {
    Point::baire(vec![], 0)
}

fn known(r: &RiseSet) -> Vec<usize> {
    r.known.iter().copied().collect()
}

fn sorg(x: Q) -> Point {
    Point::Sorg(x)
}

#[test]
fn scope_of_constant_zero_in_standard_tree() {
    let s = standard_tree();
    assert_eq!(scope(&s, &zero(), 3).unwrap(), vec![p(&[]), p(&[0]), p(&[0, 0])]);
}

#[test]
fn scope_heights_are_unique() {
    let s = standard_tree();
    let pt = Point::baire(vec![3, 1, 4], 2);
    let sc = scope(&s, &pt, 6).unwrap();
    for (h, v) in sc.iter().enumerate() {
        assert_eq!(v.height(), h);
        assert!(s.leaf(v).unwrap().member(&pt).unwrap());
    }
    for w in sc.windows(2) {
        assert!(w[0].is_below(&w[1]));
    }
}

#[test]
fn scope_of_zero_in_sorgenfrey_tree() {
    // independent enumeration of [z, z+1) with z = 0, 1, -1, 2, -2, ...
    let zs: Vec<i64> = (0..32).map(|n: i64| if n % 2 == 1 { (n + 1) / 2 } else { -n / 2 }).collect();
    let hits: Vec<usize> = (0..32).filter(|&n| zs[n] <= 0 && 0 < zs[n] + 1).collect();
    assert_eq!(hits.len(), 1);
    let t = sorgenfrey_tree();
    let sc = scope(&t, &sorg(q(0)), 2).unwrap();
    assert_eq!(sc, vec![p(&[]), p(&[hits[0] as u64])]);
    assert_eq!(t.leaf(&sc[1]).unwrap(), ClopenSet::sorg_iv(q(0), q(1)));
}

#[test]
fn scope_rejects_points_outside_or_of_wrong_shape() {
    let s = standard_tree();
    assert!(matches!(scope(&s, &sorg(q(0)), 2), Err(Error::SpaceMismatch(_))));
}

#[test]
fn shoot_refines_examples() {
    let s = standard_tree();
    assert_eq!(shoot_refines(&s, &p(&[3]), &ClopenSet::cyl(p(&[3]))).unwrap(), ShootDecision::Yes { from: 0 });
    assert_eq!(
        shoot_refines(&s, &p(&[]), &ClopenSet::tail_cyl(p(&[]), 5)).unwrap(),
        ShootDecision::Yes { from: 5 }
    );
    assert_eq!(shoot_refines(&s, &p(&[]), &ClopenSet::cyl(p(&[0, 1]))).unwrap(), ShootDecision::No);
}

#[test]
fn rise_of_standard_tree_at_cylinder() {
    let s = standard_tree();
    let u = ClopenSet::cyl(p(&[0, 0]));
    assert_eq!(known(&rise(&s, &zero(), &u, 6).unwrap()), vec![2, 3, 4, 5]);
    let r = rise(&s, &zero(), &ClopenSet::full(&Space::Baire), 6).unwrap();
    assert_eq!(known(&r), (0..6).collect::<Vec<_>>());
    assert_eq!(r.contains(6), None);
}

#[test]
fn rise_identity_for_initial_segments() {
    let s = standard_tree();
    for n in 0..4 {
        let u = ClopenSet::cyl(NodePath::new(vec![0; n]));
        assert_eq!(known(&rise(&s, &zero(), &u, 8).unwrap()), (n..8).collect::<Vec<_>>());
    }
}

#[test]
fn sorgenfrey_sons_halve_toward_the_right_end() {
    let t = sorgenfrey_tree();
    let fam = t.sons(&p(&[0])).unwrap();
    for n in 0..6u64 {
        let a = q(1) - pow2_neg(n);
        let b = q(1) - pow2_neg(n + 1);
        assert_eq!(fam.leaf(n).unwrap(), ClopenSet::sorg_iv(a.clone(), b));
        assert_eq!(fam.residual(n).unwrap(), ClopenSet::sorg_iv(a, q(1)));
    }
    let root = t.sons(&p(&[])).unwrap();
    let sp = Space::Sorg;
    assert_eq!(equal(&sp, &root.residual(0).unwrap(), &ClopenSet::sorg_line()).unwrap(), Decision::Yes);
    for n in 0..8 {
        let l = root.leaf(n).unwrap();
        assert_eq!(are_disjoint(&sp, &l, &root.residual(n + 1).unwrap()).unwrap(), Decision::Yes);
        let un = ClopenSet::union_disjoint(vec![l, root.residual(n + 1).unwrap()]);
        assert_eq!(equal(&sp, &un, &root.residual(n).unwrap()).unwrap(), Decision::Yes);
    }
}

#[test]
fn sorgenfrey_shoot_and_rise() {
    let t = sorgenfrey_tree();
    let u = ClopenSet::sorg_iv(qf(1, 2), q(1));
    assert_eq!(shoot_refines(&t, &p(&[0]), &u).unwrap(), ShootDecision::Yes { from: 1 });
    // the scope of 0 is [0, 2^(1-h)); its residuals end at the right end
    let u = ClopenSet::sorg_iv(q(0), qf(1, 8));
    let r = rise(&t, &sorg(q(0)), &u, 8).unwrap();
    let expected: Vec<usize> = (1..8).filter(|&h| pow2_neg(h as u64 - 1) <= qf(1, 8)).collect();
    assert_eq!(known(&r), expected);
    assert!(r.tail_start().unwrap() <= 5);
}

#[test]
fn canonicalize_is_identity_on_canonical_trees() {
    let s = standard_tree();
    let c = canonicalize(PathLabels(s), 4).unwrap();
    for v in [p(&[]), p(&[1]), p(&[2, 0, 5])] {
        assert_eq!(c.leaf(&v).unwrap(), s.leaf(&v).unwrap());
        assert_eq!(c.label(&v).unwrap(), v);
    }
}

#[test]
fn materialize_lists_bounded_paths() {
    let s = standard_tree();
    let nodes = materialize(&s, 3, 2).unwrap();
    assert_eq!(nodes.len(), 1 + 2 + 4);
    for n in &nodes {
        assert_eq!(n.leaf, ClopenSet::Cyl(n.path.clone()));
    }
}

fn comps(v: Vec<TreeRef>) -> Vec<TreeRef> {
    v
}

fn s_tree() -> TreeRef {
    Arc::new(standard_tree())
}

fn g_tree() -> TreeRef {
    Arc::new(sorgenfrey_tree())
}

#[test]
fn product_needs_two_coordinates() {
    assert!(matches!(product_tree(Arity::Finite(1), comps(vec![s_tree()])), Err(Error::LambdaTooSmall)));
}

#[test]
fn product_root_and_first_level() {
    let t = product_tree(Arity::Finite(2), comps(vec![s_tree(), s_tree()])).unwrap();
    let sp = t.space();
    assert_eq!(equal(&sp, &t.leaf(&p(&[])).unwrap(), &ClopenSet::full(&sp)).unwrap(), Decision::Yes);
    for m in 0..4u64 {
        let leaf = t.leaf(&p(&[m])).unwrap();
        // only coordinate 0 is touched at the root
        assert_eq!(leaf, ClopenSet::boxed_from([(0, ClopenSet::cyl(p(&[m])))]));
        for x in 0..6u64 {
            for y in 0..6u64 {
                let pt = Point::product(vec![Point::baire(vec![x], 0)], Point::baire(vec![y], 0));
                assert_eq!(leaf.member(&pt).unwrap(), x == m, "m={m} x={x} y={y}");
            }
        }
        for l in 0..5u64 {
            let a = t.index_family(&p(&[m, l])).unwrap();
            assert_eq!(a, vec![p(&[m]), p(&[l])]);
        }
    }
}

#[test]
fn product_scope_has_growing_prefixes() {
    let t = product_tree(Arity::Finite(3), comps(vec![g_tree(), g_tree(), s_tree()])).unwrap();
    let pt = Point::product(vec![sorg(qf(1, 3)), sorg(qf(-5, 2))], Point::baire(vec![2, 0, 1], 7));
    let sc = scope(&t, &pt, 7).unwrap();
    for (h, v) in sc.iter().enumerate() {
        assert!(t.leaf(v).unwrap().member(&pt).unwrap());
        assert!(t.separation(v).unwrap().at_least(&t.separation_bound(h)));
        if h % 2 == 0 {
            let a = t.index_family(v).unwrap();
            assert_eq!(a.len(), Arity::Finite(3).touched(h / 2));
            assert!(a.iter().all(|x| x.height() == h / 2));
        }
    }
}

#[test]
fn product_of_omega_coordinates_is_lazy() {
    let t = product_tree(Arity::Omega, comps(vec![g_tree()])).unwrap();
    let pt = Point::product(vec![sorg(qf(1, 3))], sorg(qf(7, 4)));
    let sc = scope(&t, &pt, 6).unwrap();
    assert_eq!(t.index_family(&sc[4]).unwrap().len(), 3);
}

#[test]
fn product_shoot_of_box_neighbourhood() {
    let t = product_tree(Arity::Finite(2), comps(vec![s_tree(), s_tree()])).unwrap();
    let pt = Point::product(vec![zero()], zero());
    let u = ClopenSet::boxed_from([(0, ClopenSet::cyl(p(&[0, 0]))), (1, ClopenSet::cyl(p(&[0])))]);
    let r = rise(&t, &pt, &u, 7).unwrap();
    assert!(r.undecided.is_empty(), "{r}");
    assert!(!r.known.is_empty(), "{r}");
    // leaves along the scope shrink into u from some height on
    let sc = scope(&t, &pt, 7).unwrap();
    let first_inside = (0..7).find(|&h| is_subset(&t.space(), &t.leaf(&sc[h]).unwrap(), &u).unwrap() == Decision::Yes);
    assert!(first_inside.is_some());
    for h in first_inside.unwrap()..7 {
        assert!(r.known.contains(&h), "{h} {r}");
    }
}

fn std_cyl() -> impl Strategy<Value = (Vec<u64>, Vec<u64>)> {
    (prop::collection::vec(0u64..3, 0..3), prop::collection::vec(0u64..3, 0..2))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn rise_is_monotone_in_the_neighbourhood((a, ext) in std_cyl(), prefix in prop::collection::vec(0u64..3, 0..4), tail in 0u64..3) {
        let s = standard_tree();
        let pt = Point::baire(prefix, tail);
        let big = ClopenSet::cyl(NodePath::new(a.clone()));
        let mut b = a.clone();
        b.extend(ext);
        let small = ClopenSet::cyl(NodePath::new(b));
        let r1: BTreeSet<usize> = rise(&s, &pt, &small, 6).unwrap().known;
        let r2: BTreeSet<usize> = rise(&s, &pt, &big, 6).unwrap().known;
        prop_assert!(r1.is_subset(&r2));
    }

    #[test]
    fn sorgenfrey_scope_contains_point(num in -40i64..40, den in 1i64..9) {
        let t = sorgenfrey_tree();
        let x = qf(num, den);
        let sc = scope(&t, &sorg(x.clone()), 6).unwrap();
        for (h, v) in sc.iter().enumerate() {
            prop_assert!(t.leaf(v).unwrap().member(&sorg(x.clone())).unwrap());
            prop_assert!(t.separation(v).unwrap().at_least(&t.separation_bound(h)));
        }
    }
}
