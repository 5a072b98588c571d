//! Boolean set expressions over clopen atoms.

use super::{ClopenSet, FamilyRef, TupleSel};
use crate::error::Result;
use crate::point::Point;
use crate::rational::Ext;
use std::collections::BTreeMap;

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Atom {
    Cyl(Vec<u64>),
    Tail(Vec<u64>, u64),
    Iv(Ext, Ext),
    Pts(Vec<Point>),
    Sel(FamilyRef, TupleSel),
    Box(BTreeMap<usize, Expr>),
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Expr {
    Empty,
    Full,
    Atom(Atom),
    Union(Vec<Expr>),
    Inter(Vec<Expr>),
    Diff(Box<Expr>, Box<Expr>),
}

impl Expr {
    pub fn set(s: &ClopenSet) -> Expr {
        match s {
            ClopenSet::Empty => Expr::Empty,
            ClopenSet::Cyl(v) if v.is_root() => Expr::Full,
            ClopenSet::Cyl(v) => Expr::Atom(Atom::Cyl(v.0.clone())),
            ClopenSet::TailCyl(v, 0) if v.is_root() => Expr::Full,
            ClopenSet::TailCyl(v, 0) => Expr::Atom(Atom::Cyl(v.0.clone())),
            ClopenSet::TailCyl(v, m) => Expr::Atom(Atom::Tail(v.0.clone(), *m)),
            ClopenSet::SorgIv(Ext::NegInf, Ext::PosInf) => Expr::Full,
            ClopenSet::SorgIv(a, b) => {
                if a < b {
                    Expr::Atom(Atom::Iv(a.clone(), b.clone()))
                } else {
                    Expr::Empty
                }
            }
            ClopenSet::Minus(a, pts) => {
                if pts.is_empty() {
                    Expr::set(a)
                } else {
                    Expr::diff(Expr::set(a), Expr::Atom(Atom::Pts(pts.clone())))
                }
            }
            ClopenSet::FinUnion(ms) => Expr::Union(ms.iter().map(Expr::set).collect()),
            ClopenSet::Box(m) if m.is_empty() => Expr::Full,
            ClopenSet::Box(m) => Expr::Atom(Atom::Box(m.iter().map(|(i, f)| (*i, Expr::set(f))).collect())),
            ClopenSet::Sel(fam, idx) => {
                if let Some(s) = idx.singleton_value() {
                    Expr::set(&fam.piece(s))
                } else if idx.is_everything() {
                    Expr::set(&fam.region())
                } else {
                    Expr::Atom(Atom::Sel(fam.clone(), idx.clone()))
                }
            }
        }
    }

    pub fn points(pts: Vec<Point>) -> Expr {
        if pts.is_empty() {
            Expr::Empty
        } else {
            Expr::Atom(Atom::Pts(pts))
        }
    }

    pub fn diff(a: Expr, b: Expr) -> Expr {
        Expr::Diff(Box::new(a), Box::new(b))
    }

    pub fn inter(a: Expr, b: Expr) -> Expr {
        Expr::Inter(vec![a, b])
    }

    pub fn union(xs: Vec<Expr>) -> Expr {
        Expr::Union(xs)
    }

    /// Structural simplification; preserves the denoted set.
    pub fn simplify(self) -> Expr {
        match self {
            Expr::Atom(Atom::Box(m)) => {
                let mut out = BTreeMap::new();
                for (i, f) in m {
                    match f.simplify() {
                        Expr::Empty => return Expr::Empty,
                        Expr::Full => {}
                        g => {
                            out.insert(i, g);
                        }
                    }
                }
                if out.is_empty() {
                    Expr::Full
                } else {
                    Expr::Atom(Atom::Box(out))
                }
            }
            Expr::Atom(Atom::Pts(p)) if p.is_empty() => Expr::Empty,
            Expr::Union(xs) => {
                let mut out = Vec::new();
                for x in xs {
                    match x.simplify() {
                        Expr::Empty => {}
                        Expr::Full => return Expr::Full,
                        Expr::Union(inner) => out.extend(inner),
                        y => out.push(y),
                    }
                }
                out.sort();
                out.dedup();
                match out.len() {
                    0 => Expr::Empty,
                    1 => out.pop().unwrap(),
                    _ => Expr::Union(out),
                }
            }
            Expr::Inter(xs) => {
                let mut out = Vec::new();
                for x in xs {
                    match x.simplify() {
                        Expr::Full => {}
                        Expr::Empty => return Expr::Empty,
                        Expr::Inter(inner) => out.extend(inner),
                        y => out.push(y),
                    }
                }
                out.sort();
                out.dedup();
                match out.len() {
                    0 => Expr::Full,
                    1 => out.pop().unwrap(),
                    _ => Expr::Inter(out),
                }
            }
            Expr::Diff(a, b) => {
                let a = a.simplify();
                let b = b.simplify();
                match (&a, &b) {
                    (Expr::Empty, _) | (_, Expr::Full) => Expr::Empty,
                    (_, Expr::Empty) => a,
                    _ if a == b => Expr::Empty,
                    _ => Expr::diff(a, b),
                }
            }
            e => e,
        }
    }

    /// Replace atoms bottom-up.
    pub fn map_atoms(&self, f: &mut dyn FnMut(&Atom) -> Expr) -> Expr {
        match self {
            Expr::Empty | Expr::Full => self.clone(),
            Expr::Atom(a) => f(a),
            Expr::Union(xs) => Expr::Union(xs.iter().map(|x| x.map_atoms(f)).collect()),
            Expr::Inter(xs) => Expr::Inter(xs.iter().map(|x| x.map_atoms(f)).collect()),
            Expr::Diff(a, b) => Expr::diff(a.map_atoms(f), b.map_atoms(f)),
        }
    }

    pub fn visit_atoms(&self, f: &mut dyn FnMut(&Atom)) {
        match self {
            Expr::Empty | Expr::Full => {}
            Expr::Atom(a) => f(a),
            Expr::Union(xs) | Expr::Inter(xs) => xs.iter().for_each(|x| x.visit_atoms(f)),
            Expr::Diff(a, b) => {
                a.visit_atoms(f);
                b.visit_atoms(f);
            }
        }
    }

    /// Evaluate a Boolean combination given truth values of atoms.
    pub fn eval_with(&self, f: &mut dyn FnMut(&Atom) -> Result<bool>) -> Result<bool> {
        Ok(match self {
            Expr::Empty => false,
            Expr::Full => true,
            Expr::Atom(a) => f(a)?,
            Expr::Union(xs) => {
                for x in xs {
                    if x.eval_with(f)? {
                        return Ok(true);
                    }
                }
                false
            }
            Expr::Inter(xs) => {
                for x in xs {
                    if !x.eval_with(f)? {
                        return Ok(false);
                    }
                }
                true
            }
            Expr::Diff(a, b) => a.eval_with(f)? && !b.eval_with(f)?,
        })
    }

    /// Membership of a point.
    pub fn contains(&self, p: &Point) -> Result<bool> {
        self.eval_with(&mut |a| atom_contains(a, p))
    }
}

pub fn atom_contains(a: &Atom, p: &Point) -> Result<bool> {
    match a {
        Atom::Cyl(v) => ClopenSet::Cyl(v.clone().into()).member(p),
        Atom::Tail(v, m) => ClopenSet::TailCyl(v.clone().into(), *m).member(p),
        Atom::Iv(x, y) => ClopenSet::SorgIv(x.clone(), y.clone()).member(p),
        Atom::Pts(ps) => Ok(ps.contains(p)),
        Atom::Sel(f, i) => ClopenSet::Sel(f.clone(), i.clone()).member(p),
        Atom::Box(m) => {
            if !matches!(p, Point::Product { .. }) {
                return Err(crate::error::Error::SpaceMismatch(format!("box vs {p}")));
            }
            for (i, f) in m {
                if !f.contains(p.coord(*i).unwrap())? {
                    return Ok(false);
                }
            }
            Ok(true)
        }
    }
}
