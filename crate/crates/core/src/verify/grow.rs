//! Rise witnesses and their finite intersections.

use super::samples::Sample;
use super::{Report, Tally};
use crate::error::Result;
use crate::tree::{rise, FoliageTree, RisePromise, RiseSet};
use serde_json::json;
use std::collections::BTreeSet;

fn heights(s: &BTreeSet<usize>) -> Vec<usize> {
    s.iter().copied().collect()
}

/// Whether `[m, bound)` lies in `known` for some `m < bound`, treating
/// undecided heights as unknown.
pub(super) fn tail_status(r: &RiseSet, wanted: impl Fn(usize) -> bool) -> Option<bool> {
    let last = (0..r.bound).rev().find(|&n| wanted(n))?;
    if r.known.contains(&last) {
        Some(true)
    } else if r.undecided.contains(&last) {
        None
    } else {
        Some(false)
    }
}

/// Rise witnesses for every sample, with the tail shape the tree promises.
pub fn grows_into_suite(tree: &dyn FoliageTree, samples: &[Sample], d: usize) -> Result<Report> {
    let mut report = Report::new("grows-into", tree.name());
    let mut witness = Tally::new("rise-nonempty", "grows-into");
    let promise = tree.rise_promise();
    let mut tail = match promise {
        RisePromise::None => None,
        RisePromise::Cofinite => Some(Tally::new("cofinite-tail", "cofinite-rise")),
        RisePromise::OddTail => Some(Tally::new("odd-tail", "odd-tail")),
    };
    for (i, s) in samples.iter().enumerate() {
        let r = rise(tree, &s.point, &s.nbhd, d)?;
        log::debug!("sample {i}: rise {r}");
        let w = || Some(json!({"sample": i, "point": s.point, "nbhd": s.nbhd.to_json(), "known": heights(&r.known), "bound": d}));
        if !r.known.is_empty() {
            witness.pass();
        } else if !r.undecided.is_empty() {
            witness.undecided(format!("sample {i}: only undecided heights {:?}", heights(&r.undecided)));
        } else {
            witness.fail(format!("sample {i}: rise of {} in {} is empty below {d}", s.point, s.nbhd.to_json()), w());
        }
        if let Some(t) = tail.as_mut() {
            let st = match promise {
                RisePromise::OddTail => tail_status(&r, |n| n % 2 == 1),
                _ => tail_status(&r, |_| true),
            };
            match st {
                Some(true) => t.pass(),
                None => t.undecided(format!("sample {i}: last height undecided")),
                Some(false) => t.fail(format!("sample {i}: rise {r} has no visible tail"), w()),
            }
        }
    }
    report.entries.push(witness.finish());
    if let Some(t) = tail {
        report.entries.push(t.finish());
    }
    Ok(report)
}

/// Pairwise and total intersections of the known parts. Empty ones are
/// truncation artifacts and come out undecided.
pub fn fip_check(rises: &[RiseSet]) -> Report {
    let mut report = Report::new("fip", "rise sets");
    let mut t = Tally::new("fip", "finite-intersection");
    let bound = rises.iter().map(|r| r.bound).min().unwrap_or(0);
    for (i, a) in rises.iter().enumerate() {
        for (j, b) in rises.iter().enumerate().skip(i + 1) {
            if a.known.intersection(&b.known).next().is_some() {
                t.pass();
            } else {
                t.undecided(format!("depth-limited: rise sets {i} and {j} share no height below {bound}"));
            }
        }
    }
    if rises.len() > 2 {
        let mut all = rises[0].known.clone();
        for r in &rises[1..] {
            all = all.intersection(&r.known).copied().collect();
        }
        if all.is_empty() {
            t.undecided(format!("depth-limited: the {} rise sets share no height below {bound}", rises.len()));
        } else {
            t.pass();
        }
    }
    report.entries.push(t.finish());
    report
}
