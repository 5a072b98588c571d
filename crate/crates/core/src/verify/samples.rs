//! Point and neighborhood samples for rise checks.

use crate::error::{Error, Result};
use crate::path::NodePath;
use crate::point::Point;
use crate::rational::{pow2_neg, qf};
use crate::space::Space;
use crate::symsets::ClopenSet;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

#[derive(Clone, Debug, PartialEq)]
pub struct Sample {
    pub point: Point,
    pub nbhd: ClopenSet,
}

impl Sample {
    pub fn new(point: Point, nbhd: ClopenSet) -> Sample {
        Sample { point, nbhd }
    }

    pub fn to_json(&self) -> Value {
        json!({"point": self.point.to_json(), "nbhd": self.nbhd.to_json()})
    }

    pub fn from_json(v: &Value) -> Result<Sample> {
        let get = |k: &str| v.get(k).ok_or_else(|| Error::Config(format!("sample needs {k:?}")));
        let point = Point::from_json(get("point")?).map_err(Error::Config)?;
        let nbhd = ClopenSet::from_json(get("nbhd")?).map_err(Error::Config)?;
        Ok(Sample { point, nbhd })
    }
}

/// Parses a JSON list of samples.
pub fn samples_from_json(v: &Value) -> Result<Vec<Sample>> {
    v.as_array()
        .ok_or_else(|| Error::Config("samples must be a list".into()))?
        .iter()
        .map(Sample::from_json)
        .collect()
}

fn coord_sample(space: &Space, rng: &mut ChaCha8Rng) -> (Point, ClopenSet) {
    match space {
        Space::Baire => {
            let len = rng.gen_range(0..4);
            let prefix: Vec<u64> = (0..len).map(|_| rng.gen_range(0..4)).collect();
            let p = Point::baire(prefix, rng.gen_range(0..3));
            let k = rng.gen_range(0..4);
            let u = ClopenSet::cyl(NodePath::new(p.restrict(k).unwrap()));
            (p, u)
        }
        Space::Sorg => {
            let x = qf(rng.gen_range(-24..24), 12);
            let w = pow2_neg(rng.gen_range(0..5));
            (Point::Sorg(x.clone()), ClopenSet::sorg_iv(x.clone(), x + w))
        }
        Space::Product { arity, .. } => {
            let k = arity.finite().unwrap_or(3).min(3);
            let mut coords = Vec::new();
            let mut factors = Vec::new();
            for i in 0..k {
                let (p, u) = coord_sample(space.factor(i).unwrap(), rng);
                coords.push(p);
                factors.push((i, u));
            }
            let tail = match arity.finite() {
                Some(_) => coords.last().unwrap().clone(),
                None => space.factor(k).unwrap().default_point(),
            };
            (Point::product(coords, tail), ClopenSet::boxed_from(factors))
        }
    }
}

/// `count` seeded samples avoiding `removed`; neighborhoods lose `removed`.
pub fn default_samples(space: &Space, removed: &[Point], count: usize, seed: u64) -> Vec<Sample> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(count);
    while out.len() < count {
        let (p, u) = coord_sample(space, &mut rng);
        if removed.contains(&p) {
            continue;
        }
        let u = if removed.is_empty() { u } else { ClopenSet::minus(u, removed.to_vec()) };
        out.push(Sample::new(p, u));
    }
    out
}
