//! Trees on products of at most countably many Baire-foliated factors.
//!
//! An even node of height `2n` carries paths `a(n, v, i)` of length `n` in
//! the component trees of the touched coordinates `i < |Λ ∩ (n+1)|`, and its
//! leaf is the box of the component leaves at those paths. Son `m` of such
//! a node is `box(m) ∖ box(m+1)`, where `box(N)` takes every component's
//! residual from `N`. The sons of an odd node are indexed by shell vectors:
//! offsets of the old coordinates above `m` and a fresh path for the next
//! coordinate.

use crate::error::{Error, Result};
use crate::path::NodePath;
use crate::point::Point;
use crate::space::{Arity, Space};
use crate::symsets::boxdiff::{Range, ShellCoords, ShellEnum, ShellFamily};
use crate::symsets::{ClopenSet, Constants, FamilyRef};
use crate::tree::{Canonical, FoliageTree, LabeledTree, Separation, SonFamily, TreeRef};
use std::collections::BTreeMap;
use std::sync::Arc;

/// Label of a product node: the component paths and, at odd heights, the
/// index `m` of the box difference.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ProdLabel {
    pub a: Vec<NodePath>,
    pub m: Option<u64>,
}

impl ProdLabel {
    /// `n` with height `2n` or `2n + 1`.
    pub fn level(&self) -> usize {
        self.a[0].height()
    }

    pub fn height(&self) -> usize {
        2 * self.level() + usize::from(self.m.is_some())
    }
}

pub struct ProductSystem {
    pub arity: Arity,
    /// Coordinate `i` uses `components[min(i, len−1)]`.
    pub components: Vec<TreeRef>,
}

pub type ProductTree = Canonical<ProductSystem>;

/// Builds the product tree over `components`.
pub fn product_tree(arity: Arity, components: Vec<TreeRef>) -> Result<ProductTree> {
    if arity.finite().is_some_and(|k| k < 2) {
        return Err(Error::LambdaTooSmall);
    }
    if components.is_empty() {
        return Err(Error::LambdaTooSmall);
    }
    if let Some(k) = arity.finite() {
        if components.len() > k {
            return Err(Error::Config(format!("{} components for arity {k}", components.len())));
        }
    }
    for (i, c) in components.iter().enumerate() {
        super::quick_component_check(c.as_ref()).map_err(|detail| Error::ComponentNotVerified { index: i, detail })?;
    }
    Ok(Canonical::new(ProductSystem { arity, components }))
}

impl ProductSystem {
    pub fn component(&self, i: usize) -> &TreeRef {
        &self.components[i.min(self.components.len() - 1)]
    }

    fn touched(&self, n: usize) -> usize {
        self.arity.touched(n)
    }

    /// Whether the odd nodes at level `n` open coordinate `n + 1`.
    fn opens(&self, n: usize) -> bool {
        self.arity.contains(n + 1)
    }

    fn shape(&self, n: usize) -> ShellEnum {
        ShellEnum { k: self.touched(n), r: if self.opens(n) { n + 1 } else { 0 } }
    }

    fn families(&self, a: &[NodePath]) -> Result<Vec<Arc<dyn SonFamily>>> {
        a.iter().enumerate().map(|(i, ai)| self.component(i).sons(ai)).collect()
    }

    /// Leaf of the even node carrying paths `a`.
    pub fn even_leaf(&self, a: &[NodePath]) -> Result<ClopenSet> {
        let mut m = BTreeMap::new();
        for (i, ai) in a.iter().enumerate() {
            m.insert(i, self.component(i).leaf(ai)?);
        }
        Ok(ClopenSet::boxed(m))
    }

    pub fn label(&self, v: &NodePath) -> Result<ProdLabel> {
        let mut l = self.root();
        for &n in v.entries() {
            l = self.son(&l, n)?;
        }
        Ok(l)
    }
}

impl Canonical<ProductSystem> {
    /// The paths `a(n, v, i)` of the even node `v`.
    pub fn index_family(&self, v: &NodePath) -> Result<Vec<NodePath>> {
        let l = self.inner.label(v)?;
        match l.m {
            None => Ok(l.a),
            Some(_) => Err(Error::Unsupported(format!("{v} has odd height"))),
        }
    }
}

impl LabeledTree for ProductSystem {
    type Label = ProdLabel;

    fn name(&self) -> String {
        let cs: Vec<String> = self.components.iter().map(|c| c.name()).collect();
        format!("product({}; {})", self.arity, cs.join(", "))
    }

    fn space(&self) -> Space {
        Space::product(self.arity, self.components.iter().map(|c| c.space()).collect())
    }

    fn root(&self) -> ProdLabel {
        ProdLabel { a: vec![NodePath::root()], m: None }
    }

    fn family(&self, l: &ProdLabel) -> Result<Arc<dyn SonFamily>> {
        let fams = self.families(&l.a)?;
        match l.m {
            None => Ok(Arc::new(EvenFamily { fams })),
            Some(m) => {
                let n = l.level();
                let shape = self.shape(n);
                let fresh = self.opens(n).then(|| self.component(n + 1).clone());
                let coords = ProdCoords { fams, m, fresh, shape };
                Ok(Arc::new(OddFamily { inner: ShellFamily::new(coords) }))
            }
        }
    }

    fn son(&self, l: &ProdLabel, n: u64) -> Result<ProdLabel> {
        match l.m {
            None => Ok(ProdLabel { a: l.a.clone(), m: Some(n) }),
            Some(m) => {
                let lev = l.level();
                let shape = self.shape(lev);
                let x = shape.unrank(n as u128)?;
                let k = shape.k;
                let mut a: Vec<NodePath> = l.a.iter().zip(&x[..k]).map(|(ai, &xi)| ai.child(m + xi)).collect();
                if shape.r > 0 {
                    a.push(NodePath::new(x[k..].to_vec()));
                }
                Ok(ProdLabel { a, m: None })
            }
        }
    }

    fn separation(&self, l: &ProdLabel) -> Result<Separation> {
        Ok(Separation::Coords(vec![l.level() as u64; l.a.len()]))
    }

    fn separation_bound(&self, d: usize) -> Separation {
        Separation::Coords(vec![(d / 2).saturating_sub(1) as u64; self.touched(d / 2)])
    }
}

fn coord_point(p: &Point, i: usize) -> Result<&Point> {
    p.coord(i).ok_or_else(|| Error::SpaceMismatch(format!("{p} is not a product point")))
}

/// Sons of an even node: `box(m) ∖ box(m+1)`.
struct EvenFamily {
    fams: Vec<Arc<dyn SonFamily>>,
}

impl EvenFamily {
    fn box_from(&self, n: u64) -> Result<ClopenSet> {
        let mut m = BTreeMap::new();
        for (i, f) in self.fams.iter().enumerate() {
            m.insert(i, f.residual(n)?);
        }
        Ok(ClopenSet::boxed(m))
    }
}

impl SonFamily for EvenFamily {
    fn leaf(&self, n: u64) -> Result<ClopenSet> {
        // split by the first coordinate whose son index is exactly n
        let k = self.fams.len();
        let mut parts = Vec::with_capacity(k);
        for q in 0..k {
            let mut m = BTreeMap::new();
            for (j, f) in self.fams.iter().enumerate() {
                let s = match j.cmp(&q) {
                    std::cmp::Ordering::Less => f.residual(n + 1)?,
                    std::cmp::Ordering::Equal => f.leaf(n)?,
                    std::cmp::Ordering::Greater => f.residual(n)?,
                };
                m.insert(j, s);
            }
            parts.push(ClopenSet::boxed(m));
        }
        Ok(ClopenSet::union_disjoint(parts))
    }

    fn residual(&self, n: u64) -> Result<ClopenSet> {
        self.box_from(n)
    }

    fn locate(&self, p: &Point) -> Result<Option<u64>> {
        let mut best: Option<u64> = None;
        for (i, f) in self.fams.iter().enumerate() {
            match f.locate(coord_point(p, i)?)? {
                None => return Ok(None),
                Some(s) => best = Some(best.map_or(s, |b| b.min(s))),
            }
        }
        Ok(best)
    }

    fn index_hint(&self, c: &Constants) -> Result<Option<u64>> {
        let mut h = 0;
        for (i, f) in self.fams.iter().enumerate() {
            match f.index_hint(&c.coord(i))? {
                Some(x) => h = h.max(x),
                None => return Ok(None),
            }
        }
        Ok(Some(h))
    }
}

struct ProdCoords {
    fams: Vec<Arc<dyn SonFamily>>,
    m: u64,
    fresh: Option<TreeRef>,
    shape: ShellEnum,
}

impl ProdCoords {
    fn fresh(&self) -> Result<&TreeRef> {
        self.fresh.as_ref().ok_or_else(|| Error::Unsupported("no fresh coordinate".into()))
    }
}

impl ShellCoords for ProdCoords {
    fn shape(&self) -> ShellEnum {
        self.shape
    }
    fn u_coord(&self, i: usize) -> usize {
        i
    }
    fn w_coord(&self) -> usize {
        self.fams.len()
    }
    fn u_set(&self, i: usize, (lo, hi): Range) -> Result<ClopenSet> {
        let f = &self.fams[i];
        match hi {
            None => f.residual(self.m + lo),
            Some(h) => Ok(ClopenSet::union_disjoint(
                (lo..h).map(|c| f.leaf(self.m + c)).collect::<Result<Vec<_>>>()?,
            )),
        }
    }
    fn w_leaf(&self, w: &NodePath) -> Result<ClopenSet> {
        self.fresh()?.leaf(w)
    }
    fn w_residual(&self, w: &NodePath, from: u64) -> Result<ClopenSet> {
        self.fresh()?.sons(w)?.residual(from)
    }
}

/// Sons of an odd node, in shell order.
struct OddFamily {
    inner: ShellFamily<ProdCoords>,
}

impl SonFamily for OddFamily {
    fn leaf(&self, n: u64) -> Result<ClopenSet> {
        self.inner.leaf(n)
    }

    fn residual(&self, n: u64) -> Result<ClopenSet> {
        self.inner.residual(n)
    }

    fn locate(&self, p: &Point) -> Result<Option<u64>> {
        let c = &self.inner.coords;
        let mut x = Vec::with_capacity(self.inner.shape.len());
        for (i, f) in c.fams.iter().enumerate() {
            match f.locate(coord_point(p, i)?)? {
                Some(s) if s >= c.m => x.push(s - c.m),
                _ => return Ok(None),
            }
        }
        if x.iter().min() != Some(&0) {
            return Ok(None);
        }
        if self.inner.shape.r > 0 {
            let t = c.fresh()?;
            let q = coord_point(p, c.fams.len())?;
            let mut w = NodePath::root();
            for _ in 0..self.inner.shape.r {
                match t.sons(&w)?.locate(q)? {
                    Some(s) => {
                        x.push(s);
                        w = w.child(s);
                    }
                    None => return Ok(None),
                }
            }
        }
        self.inner.index_of(&x).map(Some)
    }

    fn finite_len(&self) -> Option<u64> {
        self.inner.shape.total().map(|t| t as u64)
    }

    fn index_hint(&self, c: &Constants) -> Result<Option<u64>> {
        let co = &self.inner.coords;
        let mut s = 0;
        for (i, f) in co.fams.iter().enumerate() {
            match f.index_hint(&c.coord(i))? {
                Some(h) => s = s.max(h.saturating_sub(co.m)),
                None => return Ok(None),
            }
        }
        if self.inner.shape.r > 0 {
            match co.fresh()?.uniform_hint(&c.coord(co.fams.len()), self.inner.shape.r)? {
                Some(h) => s = s.max(h),
                None => return Ok(None),
            }
        }
        let start = self.inner.shape.shell_start(s)?;
        Ok(Some(u64::try_from(start).map_err(|_| Error::Overflow("shell start".into()))?))
    }

    fn cheap_index(&self, n: u64) -> u64 {
        let sh = &self.inner.shape;
        let Ok(s) = sh.shell_of(n as u128) else { return n };
        match sh.shell_start(s) {
            Ok(st) if st == n as u128 => n,
            _ => sh.shell_start(s + 1).ok().and_then(|x| u64::try_from(x).ok()).unwrap_or(n),
        }
    }

    fn family_ref(&self) -> Option<(FamilyRef, Vec<Point>)> {
        None
    }
}
