//! Shell enumeration of offset vectors and the box-difference families it
//! indexes.
//!
//! An index vector is `x = (u_0, …, u_{k−1}, w_0, …, w_{r−1})` with
//! `min(u) = 0`. Vectors are ordered by `max(x)` and then lexicographically.

use super::ClopenSet;
use crate::error::{Error, Result};
use crate::path::NodePath;
use std::collections::BTreeMap;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ShellEnum {
    pub k: usize,
    pub r: usize,
}

fn overflow() -> Error {
    Error::Overflow("shell enumeration".into())
}

fn pow(b: u128, e: usize) -> Option<u128> {
    let mut acc: u128 = 1;
    for _ in 0..e {
        acc = acc.checked_mul(b)?;
    }
    Some(acc)
}

impl ShellEnum {
    pub fn new(k: usize, r: usize) -> Result<ShellEnum> {
        if k == 0 {
            return Err(Error::ArityZero);
        }
        Ok(ShellEnum { k, r })
    }

    pub fn len(&self) -> usize {
        self.k + self.r
    }

    /// Number of vectors when finite; only `k = 1, r = 0` is.
    pub fn total(&self) -> Option<u128> {
        (self.k == 1 && self.r == 0).then_some(1)
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Completions of `a` free `u` and `b` free `w` entries inside shell `s`.
    fn completions(a: usize, b: usize, has_s: bool, has_zero: bool, s: u128) -> Option<u128> {
        let total = pow(s + 1, a + b)?;
        let no_s = pow(s, a + b)?;
        let no_zero = pow(s, a)?.checked_mul(pow(s + 1, b)?)?;
        let neither = pow(s.saturating_sub(1), a)?.checked_mul(pow(s, b)?)?;
        let mut c = total as i128;
        if !has_s {
            c -= no_s as i128;
        }
        if !has_zero {
            c -= no_zero as i128;
        }
        if !has_s && !has_zero {
            c += neither as i128;
        }
        Some(c.max(0) as u128)
    }

    /// Number of vectors with `max ≤ s`.
    fn cumulative(&self, s: i128) -> Option<u128> {
        if s < 0 {
            return Some(0);
        }
        let s = s as u128;
        let all = pow(s + 1, self.len())?;
        let no_zero = pow(s, self.k)?.checked_mul(pow(s + 1, self.r)?)?;
        all.checked_sub(no_zero)
    }

    pub fn shell_count(&self, s: u64) -> Result<u128> {
        Self::completions(self.k, self.r, false, false, s as u128).ok_or_else(overflow)
    }

    /// First index of shell `s`.
    pub fn shell_start(&self, s: u64) -> Result<u128> {
        self.cumulative(s as i128 - 1).ok_or_else(overflow)
    }

    /// Shell containing index `l`.
    pub fn shell_of(&self, l: u128) -> Result<u64> {
        if self.total().is_some_and(|t| l >= t) {
            return Err(Error::SpaceMismatch(format!("index {l} beyond a finite family")));
        }
        let mut hi: u64 = 1;
        while self.cumulative(hi as i128).ok_or_else(overflow)? <= l {
            hi = hi.checked_mul(2).ok_or_else(overflow)?;
        }
        let mut lo: u64 = 0;
        while lo < hi {
            let mid = lo + (hi - lo) / 2;
            if self.cumulative(mid as i128).ok_or_else(overflow)? > l {
                hi = mid;
            } else {
                lo = mid + 1;
            }
        }
        Ok(lo)
    }

    pub fn unrank(&self, l: u128) -> Result<Vec<u64>> {
        let s = self.shell_of(l)?;
        let mut rem = l - self.shell_start(s)?;
        let n = self.len();
        let mut x = Vec::with_capacity(n);
        let (mut has_s, mut has_zero) = (false, false);
        for pos in 0..n {
            let a = self.k.saturating_sub(pos + 1);
            let b = self.r - (pos + 1).saturating_sub(self.k);
            let mut chosen = None;
            for v in 0..=s {
                let hs = has_s || v == s;
                let hz = has_zero || (pos < self.k && v == 0);
                let c = Self::completions(a, b, hs, hz, s as u128).ok_or_else(overflow)?;
                if rem < c {
                    chosen = Some((v, hs, hz));
                    break;
                }
                rem -= c;
            }
            let (v, hs, hz) = chosen.ok_or_else(overflow)?;
            x.push(v);
            has_s = hs;
            has_zero = hz;
        }
        Ok(x)
    }

    pub fn rank(&self, x: &[u64]) -> Result<u128> {
        if x.len() != self.len() || !x[..self.k].contains(&0) {
            return Err(Error::SpaceMismatch(format!("{x:?} is not an index vector")));
        }
        let s = *x.iter().max().unwrap();
        let mut r = self.shell_start(s)?;
        let (mut has_s, mut has_zero) = (false, false);
        for (pos, &xv) in x.iter().enumerate() {
            let a = self.k.saturating_sub(pos + 1);
            let b = self.r - (pos + 1).saturating_sub(self.k);
            for v in 0..xv {
                let hs = has_s || v == s;
                let hz = has_zero || (pos < self.k && v == 0);
                r += Self::completions(a, b, hs, hz, s as u128).ok_or_else(overflow)?;
            }
            has_s = has_s || xv == s;
            has_zero = has_zero || (pos < self.k && xv == 0);
        }
        Ok(r)
    }
}

/// An index range `[lo, hi)` with `hi = None` meaning unbounded.
pub type Range = (u64, Option<u64>);

/// Per-coordinate leaves addressed by shell vectors.
pub trait ShellCoords {
    fn shape(&self) -> ShellEnum;
    /// Box coordinate of `u_i`.
    fn u_coord(&self, i: usize) -> usize;
    /// Box coordinate of the `w` part.
    fn w_coord(&self) -> usize;
    /// Union of coordinate `i` leaves with offsets in `range`.
    fn u_set(&self, i: usize, range: Range) -> Result<ClopenSet>;
    /// Leaf of the new coordinate at path `w`.
    fn w_leaf(&self, w: &NodePath) -> Result<ClopenSet>;
    /// Union of the new coordinate's sons of `w` with index `from` or more.
    fn w_residual(&self, w: &NodePath, from: u64) -> Result<ClopenSet>;

    /// Union of `w_leaf(w)` over `w` with `w_j ∈ ranges[j]`; ranges must be
    /// finite, then at most one unbounded, then unconstrained.
    fn w_set(&self, ranges: &[Range]) -> Result<ClopenSet> {
        fn rec<C: ShellCoords + ?Sized>(c: &C, rho: &NodePath, ranges: &[Range]) -> Result<ClopenSet> {
            let Some((&(lo, hi), rest)) = ranges.split_first() else {
                return c.w_leaf(rho);
            };
            let rest_free = rest.iter().all(|r| *r == (0, None));
            match hi {
                None if rest_free => {
                    if lo == 0 {
                        c.w_leaf(rho)
                    } else {
                        c.w_residual(rho, lo)
                    }
                }
                None => Err(Error::Unsupported("unbounded w range before a constrained one".into())),
                Some(h) => Ok(ClopenSet::union_disjoint(
                    (lo..h).map(|v| rec(c, &rho.child(v), rest)).collect::<Result<Vec<_>>>()?,
                )),
            }
        }
        rec(self, &NodePath::root(), ranges)
    }
}

/// The ω-indexed disjoint family over shell vectors.
pub struct ShellFamily<C> {
    pub coords: C,
    pub shape: ShellEnum,
}

const LEFTOVER_CAP: u128 = 100_000;

impl<C: ShellCoords> ShellFamily<C> {
    pub fn new(coords: C) -> ShellFamily<C> {
        let shape = coords.shape();
        ShellFamily { coords, shape }
    }

    pub fn vector(&self, l: u64) -> Result<Vec<u64>> {
        self.shape.unrank(l as u128)
    }

    pub fn index_of(&self, x: &[u64]) -> Result<u64> {
        u64::try_from(self.shape.rank(x)?).map_err(|_| overflow())
    }

    pub fn leaf_of(&self, x: &[u64]) -> Result<ClopenSet> {
        let k = self.shape.k;
        let mut m = BTreeMap::new();
        for (i, &u) in x[..k].iter().enumerate() {
            m.insert(self.coords.u_coord(i), self.coords.u_set(i, (u, Some(u + 1)))?);
        }
        if self.shape.r > 0 {
            m.insert(self.coords.w_coord(), self.coords.w_leaf(&NodePath::new(x[k..].to_vec()))?);
        }
        Ok(ClopenSet::boxed(m))
    }

    pub fn leaf(&self, l: u64) -> Result<ClopenSet> {
        self.leaf_of(&self.vector(l)?)
    }

    fn boxed(&self, u: &[Range], w: &[Range]) -> Result<Option<ClopenSet>> {
        if u.iter().chain(w.iter()).any(|(lo, hi)| hi.is_some_and(|h| h <= *lo)) {
            return Ok(None);
        }
        let mut m = BTreeMap::new();
        for (i, r) in u.iter().enumerate() {
            m.insert(self.coords.u_coord(i), self.coords.u_set(i, *r)?);
        }
        if self.shape.r > 0 {
            m.insert(self.coords.w_coord(), self.coords.w_set(w)?);
        }
        Ok(Some(ClopenSet::boxed(m)))
    }

    /// Union of all leaves in shells `s` and above, as disjoint boxes.
    pub fn tail_from_shell(&self, s: u64) -> Result<Vec<ClopenSet>> {
        let (k, r) = (self.shape.k, self.shape.r);
        let mut out = Vec::new();
        if s == 0 {
            for i0 in 0..k {
                let u: Vec<Range> = (0..k)
                    .map(|j| match j.cmp(&i0) {
                        std::cmp::Ordering::Less => (1, None),
                        std::cmp::Ordering::Equal => (0, Some(1)),
                        std::cmp::Ordering::Greater => (0, None),
                    })
                    .collect();
                let w = vec![(0, None); r];
                out.extend(self.boxed(&u, &w)?);
            }
            return Ok(out);
        }
        for q in 0..k + r {
            if q < k {
                for i0 in (0..k).filter(|&i| i != q) {
                    let u: Vec<Range> = (0..k)
                        .map(|j| {
                            if j == q {
                                (s, None)
                            } else if j == i0 {
                                (0, Some(1))
                            } else if j < q {
                                if j < i0 {
                                    (1, Some(s))
                                } else {
                                    (0, Some(s))
                                }
                            } else if j < i0 {
                                (1, None)
                            } else {
                                (0, None)
                            }
                        })
                        .collect();
                    out.extend(self.boxed(&u, &vec![(0, None); r])?);
                }
            } else {
                let jw = q - k;
                for i0 in 0..k {
                    let u: Vec<Range> = (0..k)
                        .map(|j| match j.cmp(&i0) {
                            std::cmp::Ordering::Less => (1, Some(s)),
                            std::cmp::Ordering::Equal => (0, Some(1)),
                            std::cmp::Ordering::Greater => (0, Some(s)),
                        })
                        .collect();
                    let w: Vec<Range> = (0..r)
                        .map(|t| match t.cmp(&jw) {
                            std::cmp::Ordering::Less => (0, Some(s)),
                            std::cmp::Ordering::Equal => (s, None),
                            std::cmp::Ordering::Greater => (0, None),
                        })
                        .collect();
                    out.extend(self.boxed(&u, &w)?);
                }
            }
        }
        Ok(out)
    }

    /// Union of leaves with index `l` or more.
    pub fn residual(&self, l: u64) -> Result<ClopenSet> {
        if self.shape.total().is_some_and(|t| l as u128 >= t) {
            return Ok(ClopenSet::Empty);
        }
        let s = self.shape.shell_of(l as u128)?;
        let end = self.shape.shell_start(s + 1)?;
        if end - l as u128 > LEFTOVER_CAP {
            return Err(Error::Overflow(format!("shell {s} too large for an explicit residual")));
        }
        let mut members = Vec::new();
        for j in l as u128..end {
            members.push(self.leaf(j as u64)?);
        }
        members.extend(self.tail_from_shell(s + 1)?);
        Ok(ClopenSet::union_disjoint(members))
    }

    /// Union of every leaf.
    pub fn whole(&self) -> Result<ClopenSet> {
        Ok(ClopenSet::union_disjoint(self.tail_from_shell(0)?))
    }
}

/// Coordinates of standard-tree cylinders `Cyl(a_i⌢(m + u_i))`.
#[derive(Clone, Debug)]
pub struct StdCoords {
    pub a: Vec<NodePath>,
    pub m: u64,
}

impl ShellCoords for StdCoords {
    fn shape(&self) -> ShellEnum {
        ShellEnum { k: self.a.len(), r: 0 }
    }
    fn u_coord(&self, i: usize) -> usize {
        i
    }
    fn w_coord(&self) -> usize {
        self.a.len()
    }
    fn u_set(&self, i: usize, (lo, hi): Range) -> Result<ClopenSet> {
        let base = &self.a[i];
        Ok(match hi {
            None => ClopenSet::tail_cyl(base.clone(), self.m + lo),
            Some(h) => ClopenSet::union_disjoint((lo..h).map(|c| ClopenSet::Cyl(base.child(self.m + c))).collect()),
        })
    }
    fn w_leaf(&self, _: &NodePath) -> Result<ClopenSet> {
        Ok(ClopenSet::full_product())
    }
    fn w_residual(&self, _: &NodePath, _: u64) -> Result<ClopenSet> {
        Ok(ClopenSet::full_product())
    }
}

/// The disjoint family decomposing `∏ S̃^m_{a_i} ∖ ∏ S̃^{m+1}_{a_i}` into
/// boxes `∏ Cyl(a_i⌢l_i)`, `min l = m`, in shell order.
pub struct BoxDifference {
    pub family: ShellFamily<StdCoords>,
}

impl BoxDifference {
    pub fn leaf(&self, j: u64) -> Result<ClopenSet> {
        self.family.leaf(j)
    }

    /// Absolute tuple `l` of the `j`-th member.
    pub fn tuple(&self, j: u64) -> Result<Vec<u64>> {
        let m = self.family.coords.m;
        Ok(self.family.vector(j)?.into_iter().map(|u| u + m).collect())
    }

    pub fn residual(&self, j: u64) -> Result<ClopenSet> {
        self.family.residual(j)
    }

    /// Index of the member containing the tuple `l`.
    pub fn index_of_tuple(&self, l: &[u64]) -> Result<u64> {
        let m = self.family.coords.m;
        let u: Option<Vec<u64>> = l.iter().map(|&x| x.checked_sub(m)).collect();
        self.family.index_of(&u.ok_or_else(|| Error::SpaceMismatch("tuple below m".into()))?)
    }

    /// `∏ S̃^m_{a_i}` and `∏ S̃^{m+1}_{a_i}`.
    pub fn boxes(&self) -> (ClopenSet, ClopenSet) {
        let c = &self.family.coords;
        let mk = |m: u64| ClopenSet::boxed_from(c.a.iter().enumerate().map(|(i, a)| (i, ClopenSet::tail_cyl(a.clone(), m))));
        (mk(c.m), mk(c.m + 1))
    }
}

/// Decompose the box difference at `(a, m)`.
pub fn box_difference_decomposition(k: usize, a: Vec<NodePath>, m: u64) -> Result<BoxDifference> {
    if k == 0 {
        return Err(Error::ArityZero);
    }
    if a.len() != k {
        return Err(Error::SpaceMismatch(format!("expected {k} nodes, got {}", a.len())));
    }
    Ok(BoxDifference { family: ShellFamily::new(StdCoords { a, m }) })
}
