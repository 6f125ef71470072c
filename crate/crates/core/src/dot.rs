//! DOT exports of Γ, Whitehead graphs and orbit graphs.

use std::fmt::Write as _;

use crate::graph::GraphGamma;
use crate::indices::{DirectionGraph, OrbitGraph};
use crate::lamination::{TrainTrack, WhiteheadGraph};
use crate::system::{SystemOfIsometries, Sym};

fn quote(s: &str) -> String {
    format!("\"{}\"", s.replace('\\', "\\\\").replace('"', "\\\""))
}

/// Γ as a digraph: one node per component, one edge per letter.
pub fn gamma_dot(g: &GraphGamma) -> String {
    let mut out = String::from("digraph gamma {\n");
    for (v, name) in g.vertex_names.iter().enumerate() {
        writeln!(out, "  v{v} [label={}];", quote(name)).unwrap();
    }
    for (e, &(a, b)) in g.edges.iter().enumerate() {
        writeln!(out, "  v{a} -> v{b} [label={}];", quote(&g.edge_names[e])).unwrap();
    }
    out.push_str("}\n");
    out
}

fn sym_node(s: Sym) -> String {
    format!("s{}", s.id())
}

/// The Whitehead graph at one vertex; every link carries `legal=true`.
pub fn whitehead_dot(tt: &TrainTrack, wh: &WhiteheadGraph) -> String {
    let g = &tt.graph;
    let mut out = format!("digraph whitehead_v{} {{\n", wh.vertex);
    writeln!(out, "  graph [depth={}];", tt.depth).unwrap();
    for &s in &wh.nodes {
        writeln!(out, "  {} [label={}];", sym_node(s), quote(&g.edge_label(s))).unwrap();
    }
    for &(a, b) in &wh.links {
        writeln!(out, "  {} -> {} [dir=none, legal=true];", sym_node(a), sym_node(b)).unwrap();
    }
    out.push_str("}\n");
    out
}

pub fn orbit_dot(s: &SystemOfIsometries, g: &OrbitGraph) -> String {
    let mut out = String::from("digraph orbit {\n");
    writeln!(out, "  graph [radius={}];", g.radius).unwrap();
    for (i, x) in g.nodes.iter().enumerate() {
        writeln!(out, "  n{i} [label={}, depth={}];", quote(&s.forest.describe(x)), g.depth[i]).unwrap();
    }
    for &(u, a, v) in &g.links {
        writeln!(out, "  n{u} -> n{v} [label={}];", quote(&s.letters[a].name)).unwrap();
    }
    out.push_str("}\n");
    out
}

pub fn direction_dot(s: &SystemOfIsometries, d: &DirectionGraph) -> String {
    let mut out = String::from("digraph directions {\n");
    for (i, dir) in d.nodes.iter().enumerate() {
        let tree = s.forest.tree(dir.base.tree);
        let label = format!("{} {}{}", s.forest.describe(&dir.base), tree.edge(dir.germ.edge).name, if dir.germ.up { "+" } else { "-" });
        writeln!(out, "  d{i} [label={}];", quote(&label)).unwrap();
    }
    for &(x, a, y) in &d.links {
        writeln!(out, "  d{x} -> d{y} [label={}];", quote(&s.letters[a].name)).unwrap();
    }
    out.push_str("}\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::iet::{iet_to_system, IntervalExchange};

    #[test]
    fn gamma_of_golden_is_a_rose() {
        let s = iet_to_system(&IntervalExchange::golden()).unwrap();
        let dot = gamma_dot(&s.graph());
        assert!(dot.starts_with("digraph gamma {"));
        assert_eq!(dot.matches("v0 -> v0").count(), 2);
    }
}
