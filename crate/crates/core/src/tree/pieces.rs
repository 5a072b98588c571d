//! Son families backed directly by piece families.

use super::SonFamily;
use crate::error::Result;
use crate::point::Point;
use crate::rational::{ceil_i64, q, Ext, Q};
use crate::symsets::family::sub_first_at_least;
use crate::symsets::{ClopenSet, Constants, FamilyRef};
use std::sync::Arc;

/// The sons of a region are the pieces of its family.
#[derive(Clone, Debug)]
pub struct PieceFamily(pub FamilyRef);

fn half_ceil(n: u64) -> i64 {
    n.div_ceil(2) as i64
}

impl SonFamily for PieceFamily {
    fn leaf(&self, n: u64) -> Result<ClopenSet> {
        Ok(self.0.piece(n))
    }

    fn residual(&self, n: u64) -> Result<ClopenSet> {
        Ok(match &self.0 {
            FamilyRef::Std(v) => ClopenSet::tail_cyl(v.clone(), n),
            FamilyRef::SorgSub { lo, hi } => {
                ClopenSet::sorg_iv(crate::symsets::family::sub_point(lo, hi, n), hi.clone())
            }
            FamilyRef::SorgRoot if n == 0 => ClopenSet::sorg_line(),
            FamilyRef::SorgRoot => ClopenSet::union_disjoint(vec![
                ClopenSet::sorg_interval(Ext::NegInf, Ext::Fin(q(1 - half_ceil(n)))),
                ClopenSet::sorg_interval(Ext::Fin(q(half_ceil(n + 1))), Ext::PosInf),
            ]),
        })
    }

    fn locate(&self, p: &Point) -> Result<Option<u64>> {
        Ok(self.0.locate(p))
    }

    fn family_ref(&self) -> Option<(FamilyRef, Vec<Point>)> {
        Some((self.0.clone(), Vec::new()))
    }

    fn index_hint(&self, c: &Constants) -> Result<Option<u64>> {
        Ok(Some(piece_hint(&self.0, c)))
    }
}

/// Index past which the pieces of `fam` look alike to sets built from `c`.
pub fn piece_hint(fam: &FamilyRef, c: &Constants) -> u64 {
    let mut h = match fam {
        FamilyRef::Std(_) => c.nat_max.map_or(0, |m| m + 1),
        FamilyRef::SorgSub { lo, hi } => {
            let below: Option<&Q> = c.rats.range(..hi.clone()).next_back();
            below.and_then(|r| sub_first_at_least(lo, hi, r)).map_or(0, |s| s + 1)
        }
        FamilyRef::SorgRoot => {
            let m = c.rats.iter().filter_map(|r| ceil_i64(&crate::rational::abs(r))).max().unwrap_or(0);
            2 * (m.max(0) as u64 + 1)
        }
    };
    // selections over nested families name pieces of this one
    for g in &c.families {
        if let Some(s) = g.inside_piece_of(fam) {
            h = h.max(s + 1);
        }
    }
    h
}

/// A son family with finitely many points removed from every leaf.
pub struct LossFamily {
    pub inner: Arc<dyn SonFamily>,
    pub loss: Vec<Point>,
}

impl LossFamily {
    pub fn new(inner: Arc<dyn SonFamily>, loss: Vec<Point>) -> Arc<dyn SonFamily> {
        if loss.is_empty() {
            inner
        } else {
            Arc::new(LossFamily { inner, loss })
        }
    }
}

impl SonFamily for LossFamily {
    fn leaf(&self, n: u64) -> Result<ClopenSet> {
        Ok(ClopenSet::minus(self.inner.leaf(n)?, self.loss.clone()))
    }

    fn residual(&self, n: u64) -> Result<ClopenSet> {
        Ok(ClopenSet::minus(self.inner.residual(n)?, self.loss.clone()))
    }

    fn locate(&self, p: &Point) -> Result<Option<u64>> {
        if self.loss.contains(p) {
            return Ok(None);
        }
        self.inner.locate(p)
    }

    fn finite_len(&self) -> Option<u64> {
        self.inner.finite_len()
    }

    fn family_ref(&self) -> Option<(FamilyRef, Vec<Point>)> {
        let (f, mut pts) = self.inner.family_ref()?;
        pts.extend(self.loss.iter().cloned());
        pts.sort();
        pts.dedup();
        Some((f, pts))
    }

    fn index_hint(&self, c: &Constants) -> Result<Option<u64>> {
        let mut c = c.clone();
        self.loss.iter().for_each(|p| c.add_point(p));
        self.inner.index_hint(&c)
    }

    fn shoot_threshold(&self, u: &ClopenSet) -> Result<Option<u64>> {
        let mut c = u.constants();
        self.loss.iter().for_each(|p| c.add_point(p));
        self.inner.index_hint(&c)
    }

    fn cheap_index(&self, n: u64) -> u64 {
        self.inner.cheap_index(n)
    }
}
