use pitree::rational::{q, qf, Ext};
use pitree::symsets::boxdiff::box_difference_decomposition;
use pitree::symsets::cantor;
use pitree::symsets::{are_disjoint, equal, is_empty, is_subset, point_in_difference, FamilyRef, TupleSel};
use pitree::{Arity, ClopenSet, Decision, NodePath, Point, Space};
use proptest::prelude::*;

fn p(v: &[u64]) -> NodePath {
    NodePath::new(v.to_vec())
}

fn bp(prefix: &[u64], tail: u64) -> Point {
    Point::baire(prefix.to_vec(), tail)
}

// Every Baire point with prefix length ≤ 4, entries < 4, tail < 4.
fn baire_universe() -> Vec<Point> {
    let mut out = vec![];
    for len in 0..=4u32 {
        for code in 0..4u64.pow(len) {
            let prefix: Vec<u64> = (0..len).map(|i| (code / 4u64.pow(i)) % 4).collect();
            for tail in 0..4 {
                out.push(bp(&prefix, tail));
            }
        }
    }
    out.sort();
    out.dedup();
    out
}

#[test]
fn membership_examples() {
    assert!(ClopenSet::cyl(p(&[1])).member(&bp(&[1, 2], 0)).unwrap());
    assert!(!ClopenSet::TailCyl(p(&[]), 1).member(&bp(&[], 0)).unwrap());
    let iv = ClopenSet::sorg_iv(q(0), q(1));
    assert!(iv.member(&Point::Sorg(qf(1, 2))).unwrap());
    assert!(!iv.member(&Point::Sorg(q(1))).unwrap());
}

#[test]
fn membership_space_mismatch() {
    assert!(ClopenSet::cyl(p(&[1])).member(&Point::Sorg(q(0))).is_err());
    assert!(ClopenSet::sorg_line().member(&bp(&[], 0)).is_err());
}

#[test]
fn subset_examples() {
    let b = Space::Baire;
    assert_eq!(is_subset(&b, &ClopenSet::cyl(p(&[2, 5])), &ClopenSet::cyl(p(&[2]))).unwrap(), Decision::Yes);
    for l in 0..6 {
        for m in 0..6 {
            let d = is_subset(&b, &ClopenSet::cyl(p(&[l])), &ClopenSet::TailCyl(p(&[]), m)).unwrap();
            assert_eq!(d, Decision::from_bool(l >= m), "l={l} m={m}");
        }
    }
    let s = Space::Sorg;
    assert_eq!(
        is_subset(&s, &ClopenSet::sorg_iv(qf(1, 4), qf(1, 2)), &ClopenSet::sorg_iv(q(0), q(1))).unwrap(),
        Decision::Yes
    );
}

#[test]
fn tail_cylinder_difference_is_cylinder() {
    let b = Space::Baire;
    for v in [vec![], vec![0], vec![3, 1], vec![2, 2, 7]] {
        for m in 0..5 {
            let diff = ClopenSet::FinUnion(vec![ClopenSet::cyl(p(&v).child(m)), ClopenSet::TailCyl(p(&v), m + 1)]);
            assert_eq!(equal(&b, &diff, &ClopenSet::TailCyl(p(&v), m).normalize()).unwrap(), Decision::Yes);
            let lhs = pitree::symsets::Expr::diff(
                pitree::symsets::Expr::set(&ClopenSet::TailCyl(p(&v), m)),
                pitree::symsets::Expr::set(&ClopenSet::TailCyl(p(&v), m + 1)),
            );
            let rhs = pitree::symsets::Expr::set(&ClopenSet::cyl(p(&v).child(m)));
            let sym = pitree::symsets::emptiness(&b, &pitree::symsets::Expr::diff(lhs.clone(), rhs.clone())).unwrap();
            assert_eq!(sym, pitree::symsets::Emptiness::Empty);
            let sym = pitree::symsets::emptiness(&b, &pitree::symsets::Expr::diff(rhs, lhs)).unwrap();
            assert_eq!(sym, pitree::symsets::Emptiness::Empty);
        }
    }
}

#[test]
fn tail_cylinder_zero_normalizes() {
    assert_eq!(ClopenSet::TailCyl(p(&[4]), 0).normalize(), ClopenSet::cyl(p(&[4])));
}

#[test]
fn union_merges_cylinder_and_tail() {
    let u = ClopenSet::union_disjoint(vec![ClopenSet::cyl(p(&[1, 3])), ClopenSet::TailCyl(p(&[1]), 4)]);
    assert_eq!(u, ClopenSet::TailCyl(p(&[1]), 3));
}

#[test]
fn box_difference_arity_one() {
    let d = box_difference_decomposition(1, vec![p(&[2])], 0).unwrap();
    assert_eq!(d.tuple(0).unwrap(), vec![0]);
    assert_eq!(d.leaf(0).unwrap(), ClopenSet::boxed_from([(0, ClopenSet::cyl(p(&[2, 0])))]));
    let sp = Space::product(Arity::Finite(1), vec![Space::Baire]);
    assert_eq!(is_empty(&sp, &d.residual(1).unwrap()).unwrap(), Decision::Yes);
}

#[test]
fn box_difference_first_tuples() {
    let d = box_difference_decomposition(2, vec![p(&[]), p(&[])], 0).unwrap();
    let got: Vec<Vec<u64>> = (0..3).map(|j| d.tuple(j).unwrap()).collect();
    assert_eq!(got, vec![vec![0, 0], vec![0, 1], vec![1, 0]]);
    assert_eq!(box_difference_decomposition(0, vec![], 0).err(), Some(pitree::Error::ArityZero));
}

#[test]
fn box_difference_partitions_by_brute_force() {
    let a = vec![p(&[1]), p(&[2])];
    for m in 0..3u64 {
        let d = box_difference_decomposition(2, a.clone(), m).unwrap();
        let (big, small) = d.boxes();
        let n = 12;
        let leaves: Vec<ClopenSet> = (0..n).map(|j| d.leaf(j).unwrap()).collect();
        let res = d.residual(n).unwrap();
        for x in 0..4u64 {
            for y in 0..4u64 {
                let pt = Point::product(vec![bp(&[1, x], 0), bp(&[2, y], 0)], bp(&[], 0));
                let inside = big.member(&pt).unwrap() && !small.member(&pt).unwrap();
                let hits = leaves.iter().filter(|l| l.member(&pt).unwrap()).count()
                    + usize::from(res.member(&pt).unwrap());
                assert_eq!(hits, usize::from(inside), "m={m} x={x} y={y}");
            }
        }
        let sp = Space::product(Arity::Finite(2), vec![Space::Baire]);
        let mut all = leaves.clone();
        all.push(res);
        let diff = pitree::symsets::Expr::diff(
            pitree::symsets::Expr::set(&big),
            pitree::symsets::Expr::set(&small),
        );
        let union = pitree::symsets::Expr::union(all.iter().map(pitree::symsets::Expr::set).collect());
        assert_eq!(
            pitree::symsets::emptiness(&sp, &pitree::symsets::Expr::diff(diff.clone(), union.clone())).unwrap(),
            pitree::symsets::Emptiness::Empty
        );
        assert_eq!(
            pitree::symsets::emptiness(&sp, &pitree::symsets::Expr::diff(union, diff)).unwrap(),
            pitree::symsets::Emptiness::Empty
        );
        for i in 0..all.len() {
            for j in 0..i {
                assert_eq!(are_disjoint(&sp, &all[i], &all[j]).unwrap(), Decision::Yes);
            }
        }
    }
}

#[test]
fn shell_rank_roundtrip() {
    use pitree::symsets::boxdiff::ShellEnum;
    for (k, r) in [(1, 0), (2, 0), (3, 0), (2, 2), (3, 3), (1, 2)] {
        let e = ShellEnum::new(k, r).unwrap();
        let mut prev: Option<Vec<u64>> = None;
        for l in 0..e.total().unwrap_or(300).min(300) {
            let x = e.unrank(l).unwrap();
            assert_eq!(e.rank(&x).unwrap(), l);
            assert!(x[..k].contains(&0));
            if let Some(pv) = prev {
                let key = |v: &Vec<u64>| (*v.iter().max().unwrap(), v.clone());
                assert!(key(&pv) < key(&x));
            }
            prev = Some(x);
        }
    }
}

#[test]
fn shell_enumeration_is_exhaustive() {
    use pitree::symsets::boxdiff::ShellEnum;
    let e = ShellEnum::new(2, 1).unwrap();
    let mut brute: Vec<Vec<u64>> = vec![];
    for a in 0..4 {
        for b in 0..4 {
            for c in 0..4 {
                if a == 0 || b == 0 {
                    brute.push(vec![a, b, c]);
                }
            }
        }
    }
    brute.sort_by_key(|v| (*v.iter().max().unwrap(), v.clone()));
    let first = e.shell_start(4).unwrap() as usize;
    assert_eq!(first, brute.len());
    for (l, v) in brute.iter().enumerate() {
        assert_eq!(&e.unrank(l as u128).unwrap(), v);
    }
}

#[test]
fn cantor_tuples_roundtrip() {
    for k in 1..4 {
        for s in 0..500u64 {
            let t = cantor::decode(k, s);
            assert_eq!(cantor::encode(&t), Some(s));
        }
    }
    assert_eq!(cantor::encode(&[0, 1]), Some(2));
    assert_eq!(cantor::encode(&[1, 0]), Some(1));
}

#[test]
fn selection_partition_identity() {
    let b = Space::Baire;
    let fam = FamilyRef::Std(p(&[1]));
    for tau in [vec![], vec![0], vec![2]] {
        let parent = ClopenSet::sel(fam.clone(), TupleSel::new(2, tau.clone(), 0));
        let n = 6;
        let mut parts: Vec<ClopenSet> = (0..n)
            .map(|c| {
                let mut t = tau.clone();
                t.push(c);
                ClopenSet::sel(fam.clone(), TupleSel::new(2, t, 0))
            })
            .collect();
        parts.push(ClopenSet::sel(fam.clone(), TupleSel::new(2, tau.clone(), n)));
        let union = ClopenSet::union_disjoint(parts.clone());
        assert_eq!(equal(&b, &parent, &union).unwrap(), Decision::Yes, "tau={tau:?}");
        for i in 0..parts.len() {
            for j in 0..i {
                assert_eq!(are_disjoint(&b, &parts[i], &parts[j]).unwrap(), Decision::Yes);
            }
        }
        // dropping one part leaves a witness in the difference
        let short = ClopenSet::union_disjoint(parts[1..].to_vec());
        let w = point_in_difference(&b, &parent, &short).unwrap().expect("witness");
        assert!(parent.member(&w).unwrap() && !short.member(&w).unwrap());
    }
}

#[test]
fn selection_sorgenfrey_families() {
    let s = Space::Sorg;
    let sub = FamilyRef::SorgSub { lo: q(0), hi: q(1) };
    let parent = ClopenSet::sel(sub.clone(), TupleSel::new(2, vec![1], 0));
    let kids: Vec<ClopenSet> = (0..5).map(|c| ClopenSet::sel(sub.clone(), TupleSel::new(2, vec![1, c], 0))).collect();
    let mut all = kids.clone();
    all.push(ClopenSet::sel(sub.clone(), TupleSel::new(2, vec![1], 5)));
    assert_eq!(equal(&s, &parent, &ClopenSet::union_disjoint(all)).unwrap(), Decision::Yes);
    assert_eq!(is_subset(&s, &parent, &ClopenSet::sorg_iv(q(0), q(1))).unwrap(), Decision::Yes);
    assert_eq!(is_subset(&s, &parent, &ClopenSet::sorg_iv(qf(1, 2), q(1))).unwrap(), Decision::Yes);
    assert_eq!(is_subset(&s, &parent, &ClopenSet::sorg_iv(qf(3, 4), q(1))).unwrap(), Decision::No);
    let root = FamilyRef::SorgRoot;
    let r = ClopenSet::sel(root.clone(), TupleSel::new(2, vec![0], 3));
    let w = pitree::symsets::find_point(&s, &r).unwrap().unwrap();
    assert!(r.member(&w).unwrap());
    assert_eq!(is_subset(&s, &r, &ClopenSet::sorg_ray(q(-3))).unwrap(), Decision::No);
}

#[test]
fn product_minus_points_finite_box() {
    let sp = Space::product(Arity::Finite(2), vec![Space::Baire]);
    let x = bp(&[0], 0);
    let a = ClopenSet::boxed_from([(0, ClopenSet::cyl(p(&[0])))]);
    let only = ClopenSet::boxed_from([
        (0, ClopenSet::minus(ClopenSet::cyl(p(&[0])), vec![])),
        (1, ClopenSet::cyl(p(&[]))),
    ]);
    assert_eq!(equal(&sp, &a, &only).unwrap(), Decision::Yes);
    let pt = Point::product(vec![x.clone(), x.clone()], x.clone());
    let m = ClopenSet::minus(a.clone(), vec![pt.clone()]);
    assert_eq!(is_subset(&sp, &a, &m).unwrap(), Decision::No);
    assert_eq!(point_in_difference(&sp, &a, &m).unwrap(), Some(pt));
}

#[test]
fn serialization_is_canonical() {
    let s = ClopenSet::FinUnion(vec![
        ClopenSet::sorg_iv(qf(-1, 3), q(2)),
        ClopenSet::SorgIv(Ext::Fin(q(5)), Ext::PosInf),
    ]);
    let j = serde_json::to_string(&s).unwrap();
    assert_eq!(j, r#"{"union":[{"sorg":{"hi":"2","lo":"-1/3"}},{"sorg":{"hi":"inf","lo":"5"}}]}"#);
    let back: ClopenSet = serde_json::from_str(&j).unwrap();
    assert_eq!(back, s);
}

fn arb_path() -> impl Strategy<Value = Vec<u64>> {
    prop::collection::vec(0u64..3, 0..=3)
}

fn arb_baire_set() -> impl Strategy<Value = ClopenSet> {
    let leaf = prop_oneof![
        arb_path().prop_map(|v| ClopenSet::Cyl(NodePath::new(v))),
        (arb_path(), 0u64..4).prop_map(|(v, m)| ClopenSet::TailCyl(NodePath::new(v), m)),
        Just(ClopenSet::Empty),
    ];
    leaf.prop_recursive(2, 8, 3, |inner| {
        prop_oneof![
            prop::collection::vec(inner.clone(), 1..3).prop_map(ClopenSet::FinUnion),
            (inner, prop::collection::vec((prop::collection::vec(0u64..4, 0..4), 0u64..4), 0..3)).prop_map(
                |(a, pts)| ClopenSet::Minus(Box::new(a), pts.into_iter().map(|(pre, t)| Point::baire(pre, t)).collect())
            ),
        ]
    })
}

fn brute_subset(u: &[Point], a: &ClopenSet, b: &ClopenSet) -> bool {
    u.iter().all(|x| !a.member(x).unwrap() || b.member(x).unwrap())
}

fn brute_disjoint(u: &[Point], a: &ClopenSet, b: &ClopenSet) -> bool {
    u.iter().all(|x| !(a.member(x).unwrap() && b.member(x).unwrap()))
}

fn arb_rat() -> impl Strategy<Value = pitree::rational::Q> {
    (-40i64..40, 1i64..9).prop_map(|(n, d)| qf(n, d))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn decisions_match_brute_force(a in arb_baire_set(), b in arb_baire_set()) {
        let u = baire_universe();
        let sp = Space::Baire;
        prop_assert_eq!(is_subset(&sp, &a, &b).unwrap(), Decision::from_bool(brute_subset(&u, &a, &b)));
        prop_assert_eq!(are_disjoint(&sp, &a, &b).unwrap(), Decision::from_bool(brute_disjoint(&u, &a, &b)));
    }

    #[test]
    fn normalization_is_idempotent(a in arb_baire_set()) {
        let n = a.normalize();
        prop_assert_eq!(n.normalize(), n.clone());
        prop_assert_eq!(equal(&Space::Baire, &a, &n).unwrap(), Decision::Yes);
    }

    #[test]
    fn json_roundtrip(a in arb_baire_set()) {
        let j = serde_json::to_string(&a).unwrap();
        let back: ClopenSet = serde_json::from_str(&j).unwrap();
        prop_assert_eq!(back, a);
    }

    #[test]
    fn interval_subset_matches_endpoints(a in arb_rat(), b in arb_rat(), c in arb_rat(), d in arb_rat()) {
        prop_assume!(a < b && c < d);
        let x = ClopenSet::sorg_iv(a.clone(), b.clone());
        let y = ClopenSet::sorg_iv(c.clone(), d.clone());
        prop_assert_eq!(is_subset(&Space::Sorg, &x, &y).unwrap(), Decision::from_bool(c <= a && b <= d));
        prop_assert_eq!(are_disjoint(&Space::Sorg, &x, &y).unwrap(), Decision::from_bool(b <= c || d <= a));
    }

    #[test]
    fn sorg_unions_match_sampling(ends in prop::collection::vec(arb_rat(), 4..8)) {
        // two unions of intervals; sample every endpoint and midpoints
        let mk = |e: &[pitree::rational::Q]| -> ClopenSet {
            let mut v: Vec<ClopenSet> = e.chunks(2).filter(|c| c.len() == 2).map(|c| {
                let (lo, hi) = if c[0] < c[1] { (c[0].clone(), c[1].clone()) } else { (c[1].clone(), c[0].clone()) };
                ClopenSet::sorg_iv(lo, hi)
            }).collect();
            v.retain(|s| *s != ClopenSet::Empty);
            ClopenSet::FinUnion(v)
        };
        let h = ends.len() / 2;
        let a = mk(&ends[..h]);
        let b = mk(&ends[h..]);
        let mut pts: Vec<pitree::rational::Q> = ends.clone();
        pts.sort();
        let mut samples = pts.clone();
        for w in pts.windows(2) {
            samples.push((&w[0] + &w[1]) / q(2));
        }
        samples.push(&pts[0] - q(1));
        samples.push(pts.last().unwrap() + q(1));
        let brute = samples.iter().all(|x| {
            let pt = Point::Sorg(x.clone());
            !a.member(&pt).unwrap() || b.member(&pt).unwrap()
        });
        prop_assert_eq!(is_subset(&Space::Sorg, &a, &b).unwrap(), Decision::from_bool(brute));
    }

    #[test]
    fn selections_match_brute_force(tau in prop::collection::vec(0u64..3, 0..2), from in 0u64..3,
                                    tau2 in prop::collection::vec(0u64..3, 0..2), from2 in 0u64..3,
                                    cut in 0u64..20) {
        let fam = FamilyRef::Std(NodePath::new(vec![2]));
        let a = ClopenSet::sel(fam.clone(), TupleSel::new(2, tau, from));
        let b = ClopenSet::FinUnion(vec![
            ClopenSet::sel(fam.clone(), TupleSel::new(2, tau2, from2)),
            ClopenSet::TailCyl(NodePath::new(vec![2]), cut),
        ]);
        // pieces decide membership; indices below 400 cover every pattern here
        let brute = (0..400u64).all(|s| {
            let pt = Point::baire(vec![2, s], 0);
            !a.member(&pt).unwrap() || b.member(&pt).unwrap()
        });
        prop_assert_eq!(is_subset(&Space::Baire, &a, &b).unwrap(), Decision::from_bool(brute));
    }
}
