//! Declarative construction terms.
//!
//! A term is `"standard"`, `"sorgenfrey"`, or a single-key object:
//! `{"cocountable": {"base": T, "points": [P]}}`,
//! `{"product": {"lambda": 2 | "omega", "components": [T]}}`,
//! `{"rescale": {"base": T, "alpha": A}}`,
//! `{"pipeline": {"components": [{"tree": T, "gamma": C}]}}` or
//! `{"fault": {"base": T, "kind": K, "at": [..], "son": n}}`.

use crate::constructions::{
    alpha_from_json, cocountable_tree, fault_tree, product_tree, rescale_tree, sorgenfrey_tree, standard_tree,
    theorem2_pipeline, CocountableTree, FaultKind, FilterCert, Pipeline, ProductTree, RescaledTree,
};
use crate::error::{Error, Result};
use crate::path::NodePath;
use crate::point::Point;
use crate::space::Arity;
use crate::tree::TreeRef;
use serde_json::Value;
use std::sync::Arc;

/// A built term, keeping the concrete construction for specific checks.
#[derive(Clone)]
pub enum Built {
    Plain(TreeRef),
    Product(Arc<ProductTree>),
    Rescaled(Arc<RescaledTree>),
    Cocountable(Arc<CocountableTree>),
    Pipeline(Arc<Pipeline>, Vec<(TreeRef, FilterCert)>),
}

impl Built {
    pub fn tree(&self) -> TreeRef {
        match self {
            Built::Plain(t) => t.clone(),
            Built::Product(t) => t.clone(),
            Built::Rescaled(t) => t.clone(),
            Built::Cocountable(t) => t.clone(),
            Built::Pipeline(p, _) => p.tree.clone(),
        }
    }
}

fn cfg(msg: impl Into<String>) -> Error {
    Error::Config(msg.into())
}

fn field<'a>(body: &'a Value, tag: &str, key: &str) -> Result<&'a Value> {
    body.get(key).ok_or_else(|| cfg(format!("{tag} needs {key:?}")))
}

fn list<'a>(v: &'a Value, what: &str) -> Result<&'a Vec<Value>> {
    v.as_array().ok_or_else(|| cfg(format!("{what} must be a list")))
}

fn tree_of(v: &Value) -> Result<TreeRef> {
    Ok(build(v)?.tree())
}

/// Builds the term `v`.
pub fn build(v: &Value) -> Result<Built> {
    if let Some(s) = v.as_str() {
        return match s {
            "standard" => Ok(Built::Plain(Arc::new(standard_tree()))),
            "sorgenfrey" => Ok(Built::Plain(Arc::new(sorgenfrey_tree()))),
            other => Err(cfg(format!("unknown term {other:?}"))),
        };
    }
    let obj = v.as_object().ok_or_else(|| cfg(format!("bad term {v}")))?;
    if obj.len() != 1 {
        return Err(cfg(format!("a term has exactly one tag: {v}")));
    }
    let (tag, body) = obj.iter().next().unwrap();
    match tag.as_str() {
        "standard" | "sorgenfrey" => build(&Value::String(tag.clone())),
        "cocountable" => {
            let base = tree_of(field(body, tag, "base")?)?;
            let points = list(field(body, tag, "points")?, "points")?
                .iter()
                .map(|p| Point::from_json(p).map_err(cfg))
                .collect::<Result<Vec<_>>>()?;
            Ok(Built::Cocountable(Arc::new(cocountable_tree(base, points)?)))
        }
        "product" => {
            let arity = match field(body, tag, "lambda")? {
                Value::String(s) if s == "omega" => Arity::Omega,
                Value::Number(n) => Arity::Finite(n.as_u64().ok_or_else(|| cfg("lambda must be a count"))? as usize),
                other => return Err(cfg(format!("bad lambda {other}"))),
            };
            let comps = list(field(body, tag, "components")?, "components")?
                .iter()
                .map(tree_of)
                .collect::<Result<Vec<_>>>()?;
            Ok(Built::Product(Arc::new(product_tree(arity, comps)?)))
        }
        "rescale" => {
            let base = tree_of(field(body, tag, "base")?)?;
            let alpha = alpha_from_json(field(body, tag, "alpha")?)?;
            Ok(Built::Rescaled(Arc::new(rescale_tree(base, alpha)?)))
        }
        "pipeline" => {
            let mut comps = Vec::new();
            for c in list(field(body, tag, "components")?, "components")? {
                let (t, gamma) = match c.get("tree") {
                    Some(t) => {
                        let g = match c.get("gamma") {
                            Some(g) => FilterCert::from_json(g).map_err(cfg)?,
                            None => FilterCert::cofinite_upto(8),
                        };
                        (t, g)
                    }
                    None => (c, FilterCert::cofinite_upto(8)),
                };
                comps.push((tree_of(t)?, gamma));
            }
            let p = theorem2_pipeline(comps.clone())?;
            Ok(Built::Pipeline(Arc::new(p), comps))
        }
        "fault" => {
            let base = tree_of(field(body, tag, "base")?)?;
            let kind = FaultKind::parse(field(body, tag, "kind")?.as_str().ok_or_else(|| cfg("fault kind must be a string"))?)?;
            let at: NodePath = match body.get("at") {
                Some(a) => serde_json::from_value(a.clone()).map_err(|e| cfg(e.to_string()))?,
                None => NodePath::root(),
            };
            let son = body.get("son").and_then(Value::as_u64).unwrap_or(0);
            Ok(Built::Plain(Arc::new(fault_tree(base, kind, at, son)?)))
        }
        other => Err(cfg(format!("unknown term {other:?}"))),
    }
}

/// Parses and builds a term from JSON text.
pub fn build_str(text: &str) -> Result<Built> {
    let v: Value = serde_json::from_str(text).map_err(|e| cfg(e.to_string()))?;
    build(&v)
}
