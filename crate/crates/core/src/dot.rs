//! Graphviz DOT export for Hasse diagrams and transition graphs.

use std::fmt::Write;

use crate::multi::{InvariantSetReport, TransitionGraph};
use crate::poset::Poset;

fn quote(s: &str) -> String {
    format!("\"{}\"", s.replace('\\', "\\\\").replace('"', "\\\""))
}

/// Hasse diagram drawn bottom-up: one node per element in index order,
/// elements of equal height on one rank, an edge per cover pointing up.
pub fn hasse_dot(p: &Poset) -> String {
    let mut out = String::from("digraph hasse {\n  rankdir=BT;\n  node [shape=plaintext];\n");
    for a in 0..p.len() {
        writeln!(out, "  {};", quote(p.label(a))).expect("write to string");
    }
    let mut ranks: Vec<Vec<usize>> = Vec::new();
    for a in 0..p.len() {
        let h = p.height(a).expect("in range");
        if ranks.len() <= h {
            ranks.resize(h + 1, Vec::new());
        }
        ranks[h].push(a);
    }
    for rank in ranks.iter().filter(|r| r.len() > 1) {
        let names: Vec<String> = rank.iter().map(|&a| quote(p.label(a))).collect();
        writeln!(out, "  {{ rank=same; {}; }}", names.join("; ")).expect("write to string");
    }
    for &(a, b) in p.covers() {
        writeln!(out, "  {} -> {};", quote(p.label(a)), quote(p.label(b))).expect("write to string");
    }
    out.push_str("}\n");
    out
}

/// Transition graph with one solid edge per `y ∈ F(x)`. Self-loops at
/// multivalued nodes are drawn dashed (the orbit must eventually leave);
/// invariant sets become labelled clusters.
pub fn transition_dot(g: &TransitionGraph, sets: Option<&InvariantSetReport>) -> String {
    let name = |k: usize| quote(&format!("x{}", g.nodes[k]));
    let mut out = String::from("digraph transitions {\n  rankdir=LR;\n");
    let mut clustered = vec![false; g.nodes.len()];
    if let Some(report) = sets {
        for (c, set) in report.sets.iter().enumerate() {
            let class = match set.class {
                Some(class) => serde_json::to_value(class)
                    .ok()
                    .and_then(|v| v.as_str().map(str::to_string))
                    .unwrap_or_default(),
                None => "unclassified".to_string(),
            };
            writeln!(out, "  subgraph cluster_{c} {{\n    label={};", quote(&class)).expect("write");
            for &x in &set.points {
                let k = (x - g.nodes[0]) as usize;
                clustered[k] = true;
                writeln!(out, "    {};", name(k)).expect("write");
            }
            out.push_str("  }\n");
        }
    }
    for k in (0..g.nodes.len()).filter(|&k| !clustered[k]) {
        writeln!(out, "  {};", name(k)).expect("write");
    }
    for (k, targets) in g.edges.iter().enumerate() {
        for &t in targets {
            let style = if t == k && g.self_loop_multi[k] {
                " [style=dashed, label=\"stay\"]"
            } else {
                ""
            };
            writeln!(out, "  {} -> {}{};", name(k), name(t), style).expect("write");
        }
    }
    out.push_str("}\n");
    out
}
