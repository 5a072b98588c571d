//! Exact emptiness, subset and disjointness tests.
//!
//! Point atoms are erased first: a nonempty point-free set is infinite, so
//! removing finitely many points cannot empty it. Selection atoms are removed
//! by splitting along their family: pieces that other atoms mention are
//! decided recursively, the rest behave uniformly per index pattern.

use super::cantor;
use super::expr::{Atom, Expr};
use super::family::{sub_first_at_least, sub_locate, sub_point, zigzag, zigzag_index, FamilyRef, TupleSel};
use super::{ClopenSet, Decision};
use crate::error::Error;
use crate::point::Point;
use crate::rational::{ceil_i64, floor_i64, q, Ext};
use crate::space::{Arity, Space};
use std::collections::{BTreeMap, BTreeSet, HashMap};

#[derive(Clone, Debug, PartialEq)]
pub enum Emptiness {
    Empty,
    /// Nonempty, with a member when one was extracted.
    NonEmpty(Option<Point>),
    Unknown,
}

enum Stop {
    Unknown,
    Err(Error),
}

impl From<Error> for Stop {
    fn from(e: Error) -> Self {
        Stop::Err(e)
    }
}

type R<T> = Result<T, Stop>;

/// A point-free region inside the tested set.
#[derive(Clone, Debug)]
enum Region {
    Baire(Vec<u64>),
    Sorg(Ext, Ext),
}

#[derive(Clone, Debug)]
enum Res {
    Empty,
    NonEmpty(Region),
}

const BRUTE_CAP: u64 = 4_000_000;
const COMBO_CAP: usize = 200_000;

#[derive(Default)]
struct Ctx {
    baire_memo: HashMap<Expr, Option<Vec<u64>>>,
    factor_memo: HashMap<(usize, Expr), bool>,
}

pub fn emptiness(space: &Space, e: &Expr) -> crate::error::Result<Emptiness> {
    let mut ctx = Ctx::default();
    match top(&mut ctx, space, e, 1) {
        Ok(Some(p)) => Ok(Emptiness::NonEmpty(p.into_iter().next())),
        Ok(None) => Ok(Emptiness::Empty),
        Err(Stop::Unknown) => Ok(Emptiness::Unknown),
        Err(Stop::Err(e)) => Err(e),
    }
}

pub fn is_empty(space: &Space, a: &ClopenSet) -> crate::error::Result<Decision> {
    Ok(match emptiness(space, &Expr::set(a))? {
        Emptiness::Empty => Decision::Yes,
        Emptiness::NonEmpty(_) => Decision::No,
        Emptiness::Unknown => Decision::Unknown,
    })
}

pub fn is_subset(space: &Space, a: &ClopenSet, b: &ClopenSet) -> crate::error::Result<Decision> {
    if let Some(d) = quick_subset(a, b) {
        return Ok(d);
    }
    Ok(match emptiness(space, &Expr::diff(Expr::set(a), Expr::set(b)))? {
        Emptiness::Empty => Decision::Yes,
        Emptiness::NonEmpty(_) => Decision::No,
        Emptiness::Unknown => Decision::Unknown,
    })
}

pub fn are_disjoint(space: &Space, a: &ClopenSet, b: &ClopenSet) -> crate::error::Result<Decision> {
    if let Some(d) = quick_disjoint(a, b) {
        return Ok(d);
    }
    Ok(match emptiness(space, &Expr::inter(Expr::set(a), Expr::set(b)))? {
        Emptiness::Empty => Decision::Yes,
        Emptiness::NonEmpty(_) => Decision::No,
        Emptiness::Unknown => Decision::Unknown,
    })
}

pub fn equal(space: &Space, a: &ClopenSet, b: &ClopenSet) -> crate::error::Result<Decision> {
    let x = is_subset(space, a, b)?;
    if x == Decision::No {
        return Ok(Decision::No);
    }
    let y = is_subset(space, b, a)?;
    Ok(match (x, y) {
        (_, Decision::No) => Decision::No,
        (Decision::Yes, Decision::Yes) => Decision::Yes,
        _ => Decision::Unknown,
    })
}

/// A member of `a ∖ b`, if any; errors on mismatch, `Ok(None)` also when undecided.
pub fn point_in_difference(space: &Space, a: &ClopenSet, b: &ClopenSet) -> crate::error::Result<Option<Point>> {
    Ok(match emptiness(space, &Expr::diff(Expr::set(a), Expr::set(b)))? {
        Emptiness::NonEmpty(p) => p,
        _ => None,
    })
}

pub fn find_point(space: &Space, a: &ClopenSet) -> crate::error::Result<Option<Point>> {
    Ok(match emptiness(space, &Expr::set(a))? {
        Emptiness::NonEmpty(p) => p,
        _ => None,
    })
}

fn quick_subset(a: &ClopenSet, b: &ClopenSet) -> Option<Decision> {
    use ClopenSet::*;
    match (a, b) {
        (Empty, _) => Some(Decision::Yes),
        (Cyl(x), Cyl(y)) => Some(Decision::from_bool(y.is_prefix_of(x))),
        (Cyl(x), TailCyl(y, 0)) => Some(Decision::from_bool(y.is_prefix_of(x))),
        (Cyl(x), TailCyl(y, m)) => Some(Decision::from_bool(y.is_below(x) && x.0[y.height()] >= *m)),
        (SorgIv(a1, b1), SorgIv(a2, b2)) => Some(Decision::from_bool(a2 <= a1 && b1 <= b2)),
        _ => None,
    }
}

fn quick_disjoint(a: &ClopenSet, b: &ClopenSet) -> Option<Decision> {
    use ClopenSet::*;
    match (a, b) {
        (Empty, _) | (_, Empty) => Some(Decision::Yes),
        (Cyl(x), Cyl(y)) => Some(Decision::from_bool(!x.comparable(y))),
        (SorgIv(a1, b1), SorgIv(a2, b2)) => Some(Decision::from_bool(b1 <= a2 || b2 <= a1)),
        (Box(m1), Box(m2)) => {
            let mut all_known = true;
            for (i, f) in m1 {
                if let Some(g) = m2.get(i) {
                    match quick_disjoint(f, g) {
                        Some(Decision::Yes) => return Some(Decision::Yes),
                        Some(_) => {}
                        None => all_known = false,
                    }
                }
            }
            all_known.then_some(Decision::No)
        }
        _ => None,
    }
}

// ---------------------------------------------------------------------------
// Top level: handles point atoms. Returns up to `want` members, `None` if empty.

fn top(ctx: &mut Ctx, space: &Space, e: &Expr, want: usize) -> R<Option<Vec<Point>>> {
    let mut pts = Vec::new();
    check_atoms(space, e, &mut pts)?;
    let e0 = e.map_atoms(&mut |a| match a {
        Atom::Pts(_) => Expr::Empty,
        other => Expr::Atom(other.clone()),
    });
    let e0 = e0.simplify();
    let need = want + pts.len();
    let mut found: Vec<Point> = Vec::new();
    let mut unknown = false;
    match space {
        Space::Baire | Space::Sorg => match np(ctx, space, e0) {
            Ok(Res::NonEmpty(r)) => {
                for p in region_points(&r, need) {
                    if e.contains(&p)? && !found.contains(&p) {
                        found.push(p);
                        if found.len() >= want {
                            return Ok(Some(found));
                        }
                    }
                }
            }
            Ok(Res::Empty) => {}
            Err(Stop::Unknown) => unknown = true,
            Err(e) => return Err(e),
        },
        Space::Product { .. } => match to_boxes(ctx, space, &e0) {
            Ok(boxes) => {
                for b in &boxes {
                    for p in box_points(ctx, space, b, need)? {
                        if e.contains(&p)? && !found.contains(&p) {
                            found.push(p);
                            if found.len() >= want {
                                return Ok(Some(found));
                            }
                        }
                    }
                }
            }
            Err(Stop::Unknown) => unknown = true,
            Err(e) => return Err(e),
        },
    }
    for p in &pts {
        if e.contains(p)? && !found.contains(p) {
            found.push(p.clone());
        }
    }
    if !found.is_empty() {
        return Ok(Some(found));
    }
    if unknown {
        return Err(Stop::Unknown);
    }
    Ok(None)
}

fn check_atoms(space: &Space, e: &Expr, pts: &mut Vec<Point>) -> R<()> {
    let mut bad: Option<String> = None;
    e.visit_atoms(&mut |a| {
        let ok = match (space, a) {
            (_, Atom::Pts(ps)) => {
                let ok = ps.iter().all(|p| space.admits(p));
                pts.extend(ps.iter().cloned());
                ok
            }
            (Space::Baire, Atom::Cyl(_) | Atom::Tail(..)) => true,
            (Space::Baire, Atom::Sel(FamilyRef::Std(_), _)) => true,
            (Space::Sorg, Atom::Iv(..)) => true,
            (Space::Sorg, Atom::Sel(f, _)) => f.is_sorg(),
            (Space::Product { .. }, Atom::Box(m)) => m.keys().all(|i| space.factor(*i).is_some()),
            _ => false,
        };
        if !ok && bad.is_none() {
            bad = Some(format!("{a:?} in {space}"));
        }
    });
    pts.sort();
    pts.dedup();
    match bad {
        Some(s) => Err(Stop::Err(Error::SpaceMismatch(s))),
        None => Ok(()),
    }
}

fn region_points(r: &Region, n: usize) -> Vec<Point> {
    match r {
        Region::Baire(prefix) => (0..n as u64).map(|c| Point::baire(prefix.clone(), c)).collect(),
        Region::Sorg(a, b) => {
            let mut out = Vec::new();
            for j in 0..n as u64 {
                let x = match (a, b) {
                    (Ext::Fin(a), Ext::Fin(b)) => a + (b - a) * (q(1) - crate::rational::pow2_neg(j)),
                    (Ext::Fin(a), _) => a + q(j as i64),
                    (_, Ext::Fin(b)) => b - q(1 + j as i64),
                    _ => q(j as i64),
                };
                out.push(Point::Sorg(x));
            }
            out
        }
    }
}

// ---------------------------------------------------------------------------
// Point-free decisions on Baire space and the Sorgenfrey line.

fn np(ctx: &mut Ctx, space: &Space, e: Expr) -> R<Res> {
    let e = e.simplify();
    match e {
        Expr::Empty => return Ok(Res::Empty),
        Expr::Full => {
            return Ok(Res::NonEmpty(match space {
                Space::Sorg => Region::Sorg(Ext::NegInf, Ext::PosInf),
                _ => Region::Baire(Vec::new()),
            }))
        }
        _ => {}
    }
    let mut fams: Vec<FamilyRef> = Vec::new();
    e.visit_atoms(&mut |a| {
        if let Atom::Sel(f, _) = a {
            if !fams.contains(f) {
                fams.push(f.clone());
            }
        }
    });
    if let Some(i) = fams.iter().position(FamilyRef::root_family) {
        let f = fams[i].clone();
        return split(ctx, space, e, &f);
    }
    if let Some(f) = fams.into_iter().min_by_key(family_depth) {
        return split(ctx, space, e, &f);
    }
    match space {
        Space::Baire => Ok(match baire_base(ctx, e) {
            Some(p) => Res::NonEmpty(Region::Baire(p)),
            None => Res::Empty,
        }),
        _ => {
            let ivs = intervals(&e);
            Ok(match ivs.into_iter().next() {
                Some((a, b)) => Res::NonEmpty(Region::Sorg(a, b)),
                None => Res::Empty,
            })
        }
    }
}

fn family_depth(f: &FamilyRef) -> usize {
    match f {
        FamilyRef::Std(v) => v.height(),
        _ => 0,
    }
}

// Baire derivative search: a prefix whose cylinder lies inside `e`.
fn baire_base(ctx: &mut Ctx, e: Expr) -> Option<Vec<u64>> {
    let e = e.simplify();
    match e {
        Expr::Empty => return None,
        Expr::Full => return Some(Vec::new()),
        _ => {}
    }
    if let Some(r) = ctx.baire_memo.get(&e) {
        return r.clone();
    }
    let mut cands: BTreeSet<u64> = BTreeSet::new();
    cands.insert(0);
    e.visit_atoms(&mut |a| match a {
        Atom::Cyl(w) | Atom::Tail(w, _) if !w.is_empty() => {
            cands.insert(w[0]);
            cands.insert(w[0] + 1);
        }
        Atom::Tail(_, m) => {
            cands.insert(*m);
        }
        _ => {}
    });
    let mut out = None;
    for l in cands {
        let d = e.map_atoms(&mut |a| deriv(a, l));
        if let Some(mut rest) = baire_base(ctx, d) {
            rest.insert(0, l);
            out = Some(rest);
            break;
        }
    }
    ctx.baire_memo.insert(e, out.clone());
    out
}

fn deriv(a: &Atom, l: u64) -> Expr {
    match a {
        Atom::Cyl(w) => match w.split_first() {
            None => Expr::Full,
            Some((&c, rest)) if c == l => {
                if rest.is_empty() {
                    Expr::Full
                } else {
                    Expr::Atom(Atom::Cyl(rest.to_vec()))
                }
            }
            _ => Expr::Empty,
        },
        Atom::Tail(w, m) => match w.split_first() {
            None => {
                if l >= *m {
                    Expr::Full
                } else {
                    Expr::Empty
                }
            }
            Some((&c, rest)) if c == l => {
                if rest.is_empty() && *m == 0 {
                    Expr::Full
                } else {
                    Expr::Atom(Atom::Tail(rest.to_vec(), *m))
                }
            }
            _ => Expr::Empty,
        },
        other => Expr::Atom(other.clone()),
    }
}

type Ivs = Vec<(Ext, Ext)>;

fn intervals(e: &Expr) -> Ivs {
    match e {
        Expr::Empty => vec![],
        Expr::Full => vec![(Ext::NegInf, Ext::PosInf)],
        Expr::Atom(Atom::Iv(a, b)) => {
            if a < b {
                vec![(a.clone(), b.clone())]
            } else {
                vec![]
            }
        }
        Expr::Atom(_) => vec![],
        Expr::Union(xs) => xs.iter().fold(vec![], |acc, x| iv_union(&acc, &intervals(x))),
        Expr::Inter(xs) => xs
            .iter()
            .fold(vec![(Ext::NegInf, Ext::PosInf)], |acc, x| iv_inter(&acc, &intervals(x))),
        Expr::Diff(a, b) => iv_inter(&intervals(a), &iv_complement(&intervals(b))),
    }
}

fn iv_union(a: &Ivs, b: &Ivs) -> Ivs {
    let mut all: Ivs = a.iter().chain(b.iter()).cloned().collect();
    all.sort();
    let mut out: Ivs = Vec::new();
    for (lo, hi) in all {
        if let Some(last) = out.last_mut() {
            if lo <= last.1 {
                if hi > last.1 {
                    last.1 = hi;
                }
                continue;
            }
        }
        out.push((lo, hi));
    }
    out
}

fn iv_inter(a: &Ivs, b: &Ivs) -> Ivs {
    let mut out = Vec::new();
    let (mut i, mut j) = (0, 0);
    while i < a.len() && j < b.len() {
        let lo = a[i].0.clone().max(b[j].0.clone());
        let hi = a[i].1.clone().min(b[j].1.clone());
        if lo < hi {
            out.push((lo, hi));
        }
        if a[i].1 < b[j].1 {
            i += 1;
        } else {
            j += 1;
        }
    }
    out
}

fn iv_complement(a: &Ivs) -> Ivs {
    let mut out = Vec::new();
    let mut cur = Ext::NegInf;
    for (lo, hi) in a {
        if cur < *lo {
            out.push((cur.clone(), lo.clone()));
        }
        cur = hi.clone();
    }
    if cur < Ext::PosInf {
        out.push((cur, Ext::PosInf));
    }
    out
}

// ---------------------------------------------------------------------------
// Family split.

#[derive(Clone, Debug)]
enum IAtom {
    Tc(TupleSel),
    /// `lo ≤ s < hi`.
    Range(u64, Option<u64>),
    /// `lo ≤ z_s ≤ hi` for the zigzag integer `z_s`.
    Z(Option<i64>, Option<i64>),
}

#[derive(Clone, Debug)]
enum IExpr {
    Const(bool),
    Atom(usize),
    Union(Vec<IExpr>),
    Inter(Vec<IExpr>),
    Diff(Box<IExpr>, Box<IExpr>),
}

impl IExpr {
    fn eval(&self, atoms: &[IAtom], s: u64) -> bool {
        match self {
            IExpr::Const(b) => *b,
            IExpr::Atom(i) => match &atoms[*i] {
                IAtom::Tc(t) => t.contains(s),
                IAtom::Range(lo, hi) => s >= *lo && hi.is_none_or(|h| s < h),
                IAtom::Z(lo, hi) => {
                    let z = zigzag(s);
                    lo.is_none_or(|l| z >= l) && hi.is_none_or(|h| z <= h)
                }
            },
            IExpr::Union(xs) => xs.iter().any(|x| x.eval(atoms, s)),
            IExpr::Inter(xs) => xs.iter().all(|x| x.eval(atoms, s)),
            IExpr::Diff(a, b) => a.eval(atoms, s) && !b.eval(atoms, s),
        }
    }
}

fn to_iexpr(e: &Expr, f: &mut dyn FnMut(&Atom) -> R<IExpr>) -> R<IExpr> {
    Ok(match e {
        Expr::Empty => IExpr::Const(false),
        Expr::Full => IExpr::Const(true),
        Expr::Atom(a) => f(a)?,
        Expr::Union(xs) => IExpr::Union(xs.iter().map(|x| to_iexpr(x, f)).collect::<R<_>>()?),
        Expr::Inter(xs) => IExpr::Inter(xs.iter().map(|x| to_iexpr(x, f)).collect::<R<_>>()?),
        Expr::Diff(a, b) => IExpr::Diff(Box::new(to_iexpr(a, f)?), Box::new(to_iexpr(b, f)?)),
    })
}

fn regions_disjoint(a: &FamilyRef, b: &FamilyRef) -> bool {
    match (a, b) {
        (FamilyRef::Std(v), FamilyRef::Std(w)) => !v.comparable(w),
        (FamilyRef::SorgSub { lo: a1, hi: b1 }, FamilyRef::SorgSub { lo: a2, hi: b2 }) => b1 <= a2 || b2 <= a1,
        _ => false,
    }
}

fn split(ctx: &mut Ctx, space: &Space, e: Expr, fam: &FamilyRef) -> R<Res> {
    let mut unknown = false;
    // Outside the region.
    if !fam.root_family() {
        let outside = Expr::inter(
            e.map_atoms(&mut |a| match a {
                Atom::Sel(f, _) if f == fam => Expr::Empty,
                o => Expr::Atom(o.clone()),
            }),
            Expr::diff(Expr::Full, Expr::set(&fam.region())),
        );
        match np(ctx, space, outside) {
            Ok(Res::NonEmpty(r)) => return Ok(Res::NonEmpty(r)),
            Ok(Res::Empty) => {}
            Err(Stop::Unknown) => unknown = true,
            Err(x) => return Err(x),
        }
    }
    // Classify atoms against the pieces.
    let mut atoms: Vec<IAtom> = Vec::new();
    let mut touched: BTreeSet<u64> = BTreeSet::new();
    let phi = to_iexpr(&e, &mut |a| classify(a, fam, &mut atoms, &mut touched))?;
    for &s in &touched {
        let es = Expr::inter(
            e.map_atoms(&mut |a| match a {
                Atom::Sel(f, j) if f == fam => {
                    if j.contains(s) {
                        Expr::Full
                    } else {
                        Expr::Empty
                    }
                }
                o => Expr::Atom(o.clone()),
            }),
            Expr::set(&fam.piece(s)),
        );
        match np(ctx, space, es) {
            Ok(Res::NonEmpty(r)) => return Ok(Res::NonEmpty(r)),
            Ok(Res::Empty) => {}
            Err(Stop::Unknown) => unknown = true,
            Err(x) => return Err(x),
        }
    }
    match find_index(&phi, &atoms, &touched) {
        Ok(Some(s)) => {
            return Ok(Res::NonEmpty(match fam {
                FamilyRef::Std(v) => Region::Baire(v.child(s).0),
                _ => {
                    let (a, b) = fam.piece_bounds(s).unwrap();
                    Region::Sorg(Ext::Fin(a), Ext::Fin(b))
                }
            }))
        }
        Ok(None) => {}
        Err(Stop::Unknown) => unknown = true,
        Err(x) => return Err(x),
    }
    if unknown {
        Err(Stop::Unknown)
    } else {
        Ok(Res::Empty)
    }
}

fn push(atoms: &mut Vec<IAtom>, a: IAtom) -> IExpr {
    atoms.push(a);
    IExpr::Atom(atoms.len() - 1)
}

fn classify(a: &Atom, fam: &FamilyRef, atoms: &mut Vec<IAtom>, touched: &mut BTreeSet<u64>) -> R<IExpr> {
    let c = IExpr::Const;
    Ok(match (fam, a) {
        (FamilyRef::Std(v), Atom::Cyl(w)) => {
            let w = crate::path::NodePath::new(w.clone());
            if w.is_prefix_of(v) {
                c(true)
            } else if v.is_below(&w) {
                touched.insert(w.0[v.height()]);
                c(false)
            } else {
                c(false)
            }
        }
        (FamilyRef::Std(v), Atom::Tail(w, m)) => {
            let w = crate::path::NodePath::new(w.clone());
            if w == *v {
                push(atoms, IAtom::Range(*m, None))
            } else if w.is_below(v) {
                c(v.0[w.height()] >= *m)
            } else if v.is_below(&w) {
                touched.insert(w.0[v.height()]);
                c(false)
            } else {
                c(false)
            }
        }
        (_, Atom::Sel(g, j)) => {
            if g == fam {
                push(atoms, IAtom::Tc(j.clone()))
            } else if let Some(s0) = g.inside_piece_of(fam) {
                touched.insert(s0);
                c(false)
            } else if let Some(s1) = fam.inside_piece_of(g) {
                c(j.contains(s1))
            } else if regions_disjoint(g, fam) {
                c(false)
            } else {
                return Err(Stop::Unknown);
            }
        }
        (FamilyRef::SorgSub { lo: al, hi: be }, Atom::Iv(a, b)) => {
            let alpha = Ext::Fin(al.clone());
            let beta = Ext::Fin(be.clone());
            if *b <= alpha || *a >= beta {
                c(false)
            } else if *a <= alpha && *b >= beta {
                c(true)
            } else {
                let lo_idx = match a {
                    Ext::Fin(x) if *a > alpha => {
                        let s = sub_locate(al, be, x).unwrap();
                        if &sub_point(al, be, s) != x {
                            touched.insert(s);
                        }
                        sub_first_at_least(al, be, x).unwrap()
                    }
                    _ => 0,
                };
                let hi_idx = match b {
                    Ext::Fin(y) if *b < beta => {
                        let s = sub_locate(al, be, y).unwrap();
                        if &sub_point(al, be, s) != y {
                            touched.insert(s);
                        }
                        Some(s)
                    }
                    _ => None,
                };
                push(atoms, IAtom::Range(lo_idx, hi_idx))
            }
        }
        (FamilyRef::SorgRoot, Atom::Iv(a, b)) => {
            let zlo = match a {
                Ext::Fin(x) => {
                    if !x.is_integer() {
                        touched.insert(zigzag_index(floor_i64(x).ok_or(Stop::Unknown)?));
                    }
                    Some(ceil_i64(x).ok_or(Stop::Unknown)?)
                }
                _ => None,
            };
            let zhi = match b {
                Ext::Fin(y) => {
                    if !y.is_integer() {
                        touched.insert(zigzag_index(floor_i64(y).ok_or(Stop::Unknown)?));
                    }
                    Some(floor_i64(y).ok_or(Stop::Unknown)? - 1)
                }
                _ => None,
            };
            push(atoms, IAtom::Z(zlo, zhi))
        }
        _ => return Err(Stop::Err(Error::SpaceMismatch(format!("{a:?} against family {fam}")))),
    })
}

/// Some index outside `touched` satisfying `phi`.
fn find_index(phi: &IExpr, atoms: &[IAtom], touched: &BTreeSet<u64>) -> R<Option<u64>> {
    let mut bound: u64 = touched.iter().next_back().map_or(0, |m| m + 1);
    let mut parity = false;
    let mut tcs: Vec<&TupleSel> = Vec::new();
    for a in atoms {
        match a {
            IAtom::Range(lo, hi) => {
                bound = bound.max(lo + 1);
                if let Some(h) = hi {
                    bound = bound.max(h + 1);
                }
            }
            IAtom::Z(lo, hi) => {
                parity = true;
                let m = lo.unwrap_or(0).unsigned_abs().max(hi.unwrap_or(0).unsigned_abs()) + 1;
                bound = bound.max(2 * m + 2);
            }
            IAtom::Tc(t) => tcs.push(t),
        }
    }
    if bound > BRUTE_CAP {
        return Err(Stop::Unknown);
    }
    for s in 0..bound {
        if !touched.contains(&s) && phi.eval(atoms, s) {
            return Ok(Some(s));
        }
    }
    let cands = if tcs.is_empty() {
        vec![bound, bound + 1]
    } else {
        tc_candidates(&tcs, bound, parity)?
    };
    Ok(cands.into_iter().find(|&s| phi.eval(atoms, s)))
}

/// Indices `s ≥ min` realising every membership pattern of `tcs` (and both
/// parities when asked).
fn tc_candidates(tcs: &[&TupleSel], min: u64, parity: bool) -> R<Vec<u64>> {
    let k = tcs[0].k;
    if tcs.iter().any(|t| t.k != k) {
        return Err(Stop::Unknown);
    }
    let mut bounds: Vec<Vec<u64>> = vec![vec![0]; k];
    for t in tcs {
        for (j, &c) in t.tau.iter().enumerate() {
            bounds[j].push(c);
            bounds[j].push(c + 1);
        }
        if t.tau.len() < k {
            bounds[t.tau.len()].push(t.from);
        }
    }
    for b in bounds.iter_mut() {
        b.sort();
        b.dedup();
    }
    let total: usize = bounds.iter().map(Vec::len).product();
    if total > COMBO_CAP {
        return Err(Stop::Unknown);
    }
    let classes = if parity { 2 } else { 1 };
    let mut out = Vec::new();
    let mut idx = vec![0usize; k];
    loop {
        let lows: Vec<u64> = (0..k).map(|j| bounds[j][idx[j]]).collect();
        let unbounded = (0..k).find(|&j| idx[j] + 1 == bounds[j].len());
        let mut seen = [false; 2];
        let mut got = 0;
        match unbounded {
            Some(u) => {
                let start = lows[u].max(min);
                for val in start..start + 16 {
                    let mut t = lows.clone();
                    t[u] = val;
                    let s = cantor::encode(&t).ok_or(Stop::Unknown)?;
                    if s < min {
                        continue;
                    }
                    let cl = (s % 2) as usize * (classes - 1);
                    if !seen[cl] {
                        seen[cl] = true;
                        got += 1;
                        out.push(s);
                    }
                    if got == classes {
                        break;
                    }
                }
            }
            None => {
                let highs: Vec<u64> = (0..k).map(|j| bounds[j][idx[j] + 1]).collect();
                let size: u64 = (0..k).map(|j| highs[j] - lows[j]).product();
                if size > BRUTE_CAP {
                    return Err(Stop::Unknown);
                }
                let mut t = lows.clone();
                'odo: loop {
                    let s = cantor::encode(&t).ok_or(Stop::Unknown)?;
                    if s >= min {
                        let cl = (s % 2) as usize * (classes - 1);
                        if !seen[cl] {
                            seen[cl] = true;
                            got += 1;
                            out.push(s);
                            if got == classes {
                                break;
                            }
                        }
                    }
                    let mut j = k;
                    loop {
                        if j == 0 {
                            break 'odo;
                        }
                        j -= 1;
                        t[j] += 1;
                        if t[j] < highs[j] {
                            break;
                        }
                        t[j] = lows[j];
                    }
                }
            }
        }
        // advance combination odometer
        let mut j = k;
        loop {
            if j == 0 {
                return Ok(out);
            }
            j -= 1;
            idx[j] += 1;
            if idx[j] < bounds[j].len() {
                break;
            }
            idx[j] = 0;
        }
    }
}

// ---------------------------------------------------------------------------
// Products: decomposition into boxes.

type PBox = BTreeMap<usize, Expr>;

fn factor_empty(ctx: &mut Ctx, space: &Space, i: usize, e: &Expr) -> R<bool> {
    let e = e.clone().simplify();
    match e {
        Expr::Empty => return Ok(true),
        Expr::Full => return Ok(false),
        _ => {}
    }
    let key = (i, e);
    if let Some(b) = ctx.factor_memo.get(&key) {
        return Ok(*b);
    }
    let fs = space.factor(i).ok_or_else(|| Error::SpaceMismatch(format!("coordinate {i} outside {space}")))?.clone();
    let r = top(ctx, &fs, &key.1, 1)?.is_none();
    ctx.factor_memo.insert(key, r);
    Ok(r)
}

fn box_empty(ctx: &mut Ctx, space: &Space, b: &PBox) -> R<bool> {
    for (i, f) in b {
        if factor_empty(ctx, space, *i, f)? {
            return Ok(true);
        }
    }
    Ok(false)
}

fn box_inter(a: &PBox, b: &PBox) -> PBox {
    let mut out = a.clone();
    for (i, f) in b {
        let g = match out.remove(i) {
            Some(e) => Expr::inter(e, f.clone()).simplify(),
            None => f.clone(),
        };
        out.insert(*i, g);
    }
    out
}

fn box_subtract(ctx: &mut Ctx, space: &Space, a: &PBox, b: &PBox) -> R<Vec<PBox>> {
    if box_empty(ctx, space, &box_inter(a, b))? {
        return Ok(vec![a.clone()]);
    }
    let mut out = Vec::new();
    let mut prefix = a.clone();
    for (i, f) in b {
        let pc = prefix.get(i).cloned().unwrap_or(Expr::Full);
        let mut piece = prefix.clone();
        piece.insert(*i, Expr::diff(pc.clone(), f.clone()).simplify());
        if !box_empty(ctx, space, &piece)? {
            out.push(piece);
        }
        prefix.insert(*i, Expr::inter(pc, f.clone()).simplify());
    }
    Ok(out)
}

fn to_boxes(ctx: &mut Ctx, space: &Space, e: &Expr) -> R<Vec<PBox>> {
    Ok(match e {
        Expr::Empty => vec![],
        Expr::Full => vec![PBox::new()],
        Expr::Atom(Atom::Box(m)) => {
            let b: PBox = m.clone();
            if box_empty(ctx, space, &b)? {
                vec![]
            } else {
                vec![b]
            }
        }
        Expr::Atom(a) => return Err(Stop::Err(Error::SpaceMismatch(format!("{a:?} in {space}")))),
        Expr::Union(xs) => {
            let mut out = Vec::new();
            for x in xs {
                out.extend(to_boxes(ctx, space, x)?);
            }
            out
        }
        Expr::Inter(xs) => {
            let mut acc = vec![PBox::new()];
            for x in xs {
                let bs = to_boxes(ctx, space, x)?;
                let mut next = Vec::new();
                for a in &acc {
                    for b in &bs {
                        let c = box_inter(a, b);
                        if !box_empty(ctx, space, &c)? {
                            next.push(c);
                        }
                    }
                }
                acc = next;
                if acc.is_empty() {
                    break;
                }
            }
            acc
        }
        Expr::Diff(a, b) => {
            let mut acc = to_boxes(ctx, space, a)?;
            if acc.is_empty() {
                return Ok(acc);
            }
            for bb in to_boxes(ctx, space, b)? {
                let mut next = Vec::new();
                for p in &acc {
                    next.extend(box_subtract(ctx, space, p, &bb)?);
                }
                acc = next;
                if acc.is_empty() {
                    break;
                }
            }
            acc
        }
    })
}

fn box_points(ctx: &mut Ctx, space: &Space, b: &PBox, want: usize) -> R<Vec<Point>> {
    let (arity, nf) = match space {
        Space::Product { arity, factors } => (*arity, factors.len()),
        _ => unreachable!(),
    };
    let max_support = b.keys().next_back().copied();
    let free = match arity {
        Arity::Omega => Some(max_support.map_or(0, |m| m + 1).max(nf)),
        Arity::Finite(n) => (0..n).find(|i| !b.contains_key(i)),
    };
    let mut coords: Vec<usize> = b.keys().copied().collect();
    let mut lists: Vec<Vec<Point>> = Vec::new();
    for (i, f) in b {
        let fs = space.factor(*i).unwrap().clone();
        let pts = top(ctx, &fs, f, want)?.unwrap_or_default();
        if pts.is_empty() {
            return Ok(vec![]);
        }
        lists.push(pts);
    }
    if let Some(fc) = free {
        let fs = space.factor(fc).unwrap().clone();
        coords.push(fc);
        lists.push(top(ctx, &fs, &Expr::Full, want)?.unwrap_or_default());
    }
    let last = coords.iter().copied().max().unwrap_or(0);
    let tail = space.factor(last + 1).or_else(|| space.factor(last)).unwrap().default_point();
    let mut out = Vec::new();
    let mut idx = vec![0usize; lists.len()];
    loop {
        let mut explicit: Vec<Point> = (0..=last).map(|i| space.factor(i).unwrap().default_point()).collect();
        for (n, &c) in coords.iter().enumerate() {
            explicit[c] = lists[n][idx[n]].clone();
        }
        out.push(Point::product(explicit, tail.clone()));
        if out.len() >= want {
            return Ok(out);
        }
        let mut j = lists.len();
        loop {
            if j == 0 {
                return Ok(out);
            }
            j -= 1;
            idx[j] += 1;
            if idx[j] < lists[j].len() {
                break;
            }
            idx[j] = 0;
        }
    }
}
