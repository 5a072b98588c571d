//! JSON-lines and DOT renderings of truncated trees.

use crate::error::{Error, Result};
use crate::path::NodePath;
use crate::tree::{materialize, FoliageTree, NodeRecord};
use std::fmt::Write;

/// One `{path, height, leaf}` object per line.
pub fn to_jsonl(records: &[NodeRecord]) -> String {
    let mut out = String::new();
    for r in records {
        out.push_str(&serde_json::to_string(r).expect("records serialize"));
        out.push('\n');
    }
    out
}

pub fn from_jsonl(text: &str) -> Result<Vec<NodeRecord>> {
    text.lines()
        .filter(|l| !l.trim().is_empty())
        .enumerate()
        .map(|(i, l)| serde_json::from_str(l).map_err(|e| Error::Config(format!("line {}: {e}", i + 1))))
        .collect()
}

fn escape(s: &str) -> String {
    s.replace('\\', "\\\\").replace('"', "\\\"")
}

fn id(v: &NodePath) -> String {
    let parts: Vec<String> = v.entries().iter().map(u64::to_string).collect();
    format!("n_{}", parts.join("_"))
}

/// Tree edges with leaf labels; each truncated family ends in an ellipsis
/// node labelled by its residual.
pub fn to_dot(tree: &dyn FoliageTree, depth: usize, sons: u64) -> Result<String> {
    let records = materialize(tree, depth, sons)?;
    let mut out = String::new();
    let _ = writeln!(out, "digraph \"{}\" {{", escape(&tree.name()));
    let _ = writeln!(out, "  node [shape=box, fontname=monospace];");
    for r in &records {
        let _ = writeln!(out, "  {} [label=\"{}\\n{}\"];", id(&r.path), r.path, escape(&r.leaf.to_string()));
        if let Some((p, _)) = r.path.parent() {
            let _ = writeln!(out, "  {} -> {};", id(&p), id(&r.path));
        }
    }
    for r in records.iter().filter(|r| r.height + 1 < depth) {
        let fam = tree.sons(&r.path)?;
        if fam.finite_len().is_some_and(|n| n <= sons) {
            continue;
        }
        let rest = fam.residual(sons)?;
        let e = format!("{}_more", id(&r.path));
        let _ = writeln!(out, "  {e} [shape=plaintext, label=\"…\\n{}\"];", escape(&rest.to_string()));
        let _ = writeln!(out, "  {} -> {e} [style=dashed];", id(&r.path));
    }
    out.push_str("}\n");
    Ok(out)
}
