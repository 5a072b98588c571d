//! Fixtures shared by the benchmarks.

use pitree::constructions::{cocountable_tree, product_tree, sorgenfrey_tree, standard_tree, CocountableTree, ProductTree};
use pitree::rational::qf;
use pitree::tree::TreeRef;
use pitree::{Arity, Point};
use std::sync::Arc;

pub fn standard() -> TreeRef {
    Arc::new(standard_tree())
}

pub fn sorgenfrey() -> TreeRef {
    Arc::new(sorgenfrey_tree())
}

pub fn sorgenfrey_square() -> ProductTree {
    product_tree(Arity::Finite(2), vec![sorgenfrey(), sorgenfrey()]).expect("valid product")
}

pub fn omega_sorgenfrey() -> ProductTree {
    product_tree(Arity::Omega, vec![sorgenfrey()]).expect("valid product")
}

pub fn five_points() -> Vec<Point> {
    [qf(0, 1), qf(1, 2), qf(-3, 4), qf(1, 3), qf(5, 2)].into_iter().map(Point::Sorg).collect()
}

pub fn cocountable() -> CocountableTree {
    cocountable_tree(sorgenfrey(), five_points()).expect("rational points")
}
