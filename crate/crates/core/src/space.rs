//! Space signatures.

use crate::point::Point;
use crate::rational::q;
use serde::{Deserialize, Serialize};
use std::fmt;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Arity {
    Finite(usize),
    Omega,
}

impl Arity {
    pub fn contains(&self, i: usize) -> bool {
        match self {
            Arity::Finite(n) => i < *n,
            Arity::Omega => true,
        }
    }

    /// `|Λ ∩ (n+1)|`.
    pub fn touched(&self, n: usize) -> usize {
        match self {
            Arity::Finite(k) => (n + 1).min(*k),
            Arity::Omega => n + 1,
        }
    }

    pub fn finite(&self) -> Option<usize> {
        match self {
            Arity::Finite(n) => Some(*n),
            Arity::Omega => None,
        }
    }
}

impl fmt::Display for Arity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Arity::Finite(n) => write!(f, "{n}"),
            Arity::Omega => write!(f, "ω"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Space {
    Baire,
    Sorg,
    /// Coordinate `i` lives in `factors[min(i, len-1)]`.
    Product { arity: Arity, factors: Vec<Space> },
}

impl Space {
    pub fn product(arity: Arity, factors: Vec<Space>) -> Space {
        Space::Product { arity, factors }
    }

    pub fn factor(&self, i: usize) -> Option<&Space> {
        match self {
            Space::Product { arity, factors } if arity.contains(i) && !factors.is_empty() => {
                Some(&factors[i.min(factors.len() - 1)])
            }
            _ => None,
        }
    }

    pub fn is_product(&self) -> bool {
        matches!(self, Space::Product { .. })
    }

    /// A fixed point of the space.
    pub fn default_point(&self) -> Point {
        match self {
            Space::Baire => Point::baire(Vec::new(), 0),
            Space::Sorg => Point::Sorg(q(0)),
            Space::Product { factors, .. } => {
                let coords: Vec<Point> = factors.iter().map(Space::default_point).collect();
                Point::product_list(coords).unwrap_or_else(|| Point::baire(Vec::new(), 0))
            }
        }
    }

    /// Whether `p` has the shape of a point of this space.
    pub fn admits(&self, p: &Point) -> bool {
        match (self, p) {
            (Space::Baire, Point::Baire { .. }) | (Space::Sorg, Point::Sorg(_)) => true,
            (Space::Product { arity, factors }, Point::Product { explicit, tail }) => {
                let n = match arity {
                    Arity::Finite(n) => *n,
                    Arity::Omega => explicit.len().max(factors.len()) + 1,
                };
                (0..n).all(|i| {
                    let c = explicit.get(i).unwrap_or(tail);
                    self.factor(i).is_some_and(|s| s.admits(c))
                })
            }
            _ => false,
        }
    }
}

impl fmt::Display for Space {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Space::Baire => write!(f, "baire"),
            Space::Sorg => write!(f, "sorg"),
            Space::Product { arity, factors } => {
                write!(f, "prod[{arity}](")?;
                for (i, s) in factors.iter().enumerate() {
                    if i > 0 {
                        write!(f, ",")?;
                    }
                    write!(f, "{s}")?;
                }
                write!(f, ")")
            }
        }
    }
}
