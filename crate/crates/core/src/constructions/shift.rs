//! Shifting filters on ω so that images of their members meet infinitely.

use super::omega::{FilterCert, OmegaSet};
use crate::error::{Error, Result};
use crate::space::Arity;
use std::collections::{BTreeMap, BTreeSet};
use std::sync::Mutex;

#[derive(Default)]
struct Cache {
    /// `f[n][i] = f_i(n)`.
    f: BTreeMap<usize, Vec<u64>>,
    h: Vec<u64>,
}

/// The greedy sequences `f_i(n)`, `h_i` and the maps `α_n`, computed on
/// demand.
pub struct ShiftResult {
    pub lambda: Arity,
    delta: Vec<FilterCert>,
    gamma: Vec<FilterCert>,
    /// `⋂_{j ≤ i} G_j(n)` per gamma certificate, up to its last listed set.
    meets: Vec<Vec<OmegaSet>>,
    cache: Mutex<Cache>,
}

fn cert_at(list: &[FilterCert], n: usize) -> &FilterCert {
    &list[n.min(list.len() - 1)]
}

/// Index into a per-coordinate list; coordinate 0 of `gamma` is unused.
fn gamma_index(list_len: usize, n: usize) -> usize {
    n.min(list_len - 1)
}

impl ShiftResult {
    /// `delta[n]` and `gamma[n]` describe coordinate `n`, the last entry
    /// repeating; `gamma[0]` is ignored.
    pub fn new(lambda: Arity, delta: Vec<FilterCert>, gamma: Vec<FilterCert>) -> Result<ShiftResult> {
        if lambda.finite().is_some_and(|k| k < 2) {
            return Err(Error::LambdaTooSmall);
        }
        if delta.is_empty() || gamma.len() < 2 {
            return Err(Error::Config("shift needs delta for coordinate 0 and gamma from coordinate 1".into()));
        }
        let d0 = &delta[0];
        let all0 = d0.sets.iter().skip(1).fold(d0.sets[0].clone(), |a, s| a.intersect(s));
        if !all0.is_infinite() {
            return Err(Error::FipViolation(format!("members of delta_0 meet in {all0}")));
        }
        let mut meets = Vec::new();
        for (c, g) in gamma.iter().enumerate().skip(1) {
            let mut acc = g.sets[0].clone();
            let mut row = vec![acc.clone()];
            for s in &g.sets[1..] {
                acc = acc.intersect(s);
                row.push(acc.clone());
            }
            if !acc.is_infinite() {
                return Err(Error::FipViolation(format!("members of gamma_{c} meet in {acc}")));
            }
            meets.push(row);
        }
        let coords = delta.len().max(gamma.len());
        for n in 1..coords {
            let g = cert_at(&gamma, n);
            for (di, d) in cert_at(&delta, n).sets.iter().enumerate() {
                if !g.sets.iter().any(|s| !s.is_empty() && s.is_subset(d)) {
                    return Err(Error::NotRefining(format!(
                        "no member of gamma_{n} lies inside member {di} of delta_{n}: {d}"
                    )));
                }
            }
        }
        Ok(ShiftResult { lambda, delta, gamma, meets, cache: Mutex::new(Cache::default()) })
    }

    /// The members of `δ_n` listed in the certificate.
    pub fn delta(&self, n: usize) -> &[OmegaSet] {
        &cert_at(&self.delta, n).sets
    }

    fn meet(&self, n: usize, i: usize) -> &OmegaSet {
        let row = &self.meets[gamma_index(self.gamma.len(), n) - 1];
        &row[i.min(row.len() - 1)]
    }

    fn extend_f(&self, cache: &mut Cache, n: usize, i: usize) -> Result<u64> {
        let row = cache.f.entry(n).or_default();
        while row.len() <= i {
            let l = row.len();
            let prev = row.last().map_or(0, |x| x + 1);
            let set = if n == 0 { &self.delta[0].sets[0] } else { self.meet(n, l) };
            let v = set
                .next_at_least(prev)
                .ok_or_else(|| Error::FipViolation(format!("no f_{l}({n}) above {prev} in {set}")))?;
            row.push(v);
        }
        Ok(row[i])
    }

    /// `f_i(n)`, with `f_{−1}(n) = −1`.
    pub fn f(&self, i: i64, n: usize) -> Result<i64> {
        if i < 0 {
            return Ok(-1);
        }
        let mut c = self.cache.lock().unwrap();
        Ok(self.extend_f(&mut c, n, i as usize)? as i64)
    }

    /// `h_i`, with `h_{−1} = −1`.
    pub fn h(&self, i: i64) -> Result<i64> {
        if i < 0 {
            return Ok(-1);
        }
        let i = i as usize;
        let mut c = self.cache.lock().unwrap();
        while c.h.len() <= i {
            let t = c.h.len();
            let last = c.h.last().map_or(-1, |x| *x as i64);
            let mut gap = 0i64;
            for j in 0..self.lambda.touched(t) {
                let hi = self.extend_f(&mut c, j, t - j)? as i64;
                let lo = if t == j { -1 } else { self.extend_f(&mut c, j, t - j - 1)? as i64 };
                gap = gap.max(hi - lo);
            }
            let v = last + gap + 1;
            c.h.push(u64::try_from(v).map_err(|_| Error::Overflow("h".into()))?);
        }
        Ok(c.h[i] as i64)
    }

    /// `α_n(x)`: `β_n` on `F(n)`, consecutive values in the gaps, the
    /// identity below `f_0(n)`.
    pub fn alpha(&self, n: usize, x: u64) -> Result<u64> {
        let x = x as i64;
        if x < self.f(0, n)? {
            return Ok(x as u64);
        }
        let mut l = 0i64;
        while self.f(l + 1, n)? <= x {
            l += 1;
        }
        Ok((self.h(n as i64 + l)? + x - self.f(l, n)?) as u64)
    }

    /// `α_n[D] ∩ [0, bound)`.
    pub fn image_below(&self, n: usize, d: &OmegaSet, bound: u64) -> Result<BTreeSet<u64>> {
        let mut out = BTreeSet::new();
        for x in d.below(bound) {
            let y = self.alpha(n, x)?;
            if y >= bound {
                break;
            }
            out.insert(y);
        }
        Ok(out)
    }

    /// `F(n) ∩ [0, bound)` as `f_0(n) < f_1(n) < …`.
    pub fn f_row(&self, n: usize, bound: u64) -> Result<Vec<u64>> {
        let mut out = Vec::new();
        for i in 0.. {
            let v = self.f(i, n)? as u64;
            if v >= bound {
                break;
            }
            out.push(v);
        }
        Ok(out)
    }
}

/// A tuple `(D_0, …, D_k)` whose shifted images meet in fewer than the
/// required number of points below the bound.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MeetShortfall {
    pub choice: Vec<usize>,
    pub common: BTreeSet<u64>,
}

/// Checks every tuple of listed members, `k` from 0 to `max_k`, for at
/// least `need` common points of the images below `bound`.
pub fn check_images_meet(s: &ShiftResult, max_k: usize, bound: u64, need: usize) -> Result<Option<MeetShortfall>> {
    let mut images: Vec<Vec<BTreeSet<u64>>> = Vec::new();
    for n in 0..=max_k {
        images.push(s.delta(n).iter().map(|d| s.image_below(n, d, bound)).collect::<Result<_>>()?);
    }
    for k in 0..=max_k {
        let mut choice = vec![0usize; k + 1];
        loop {
            let mut common = images[0][choice[0]].clone();
            for i in 1..=k {
                common = common.intersection(&images[i][choice[i]]).copied().collect();
            }
            if common.len() < need {
                return Ok(Some(MeetShortfall { choice, common }));
            }
            let mut pos = 0;
            loop {
                if pos > k {
                    break;
                }
                choice[pos] += 1;
                if choice[pos] < images[pos].len() {
                    break;
                }
                choice[pos] = 0;
                pos += 1;
            }
            if pos > k {
                break;
            }
        }
    }
    Ok(None)
}
