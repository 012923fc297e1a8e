//! Graphviz DOT export.

use std::collections::HashSet;

use crate::graph::DiGraph;
use crate::product::ProductGraph;

fn quote(s: &str) -> String {
    format!("\"{}\"", s.replace('\\', "\\\\").replace('"', "\\\""))
}

/// Render a digraph. Nodes in `highlight` (e.g. parent-SCC members) are
/// filled light blue.
pub fn graph_to_dot(g: &DiGraph, highlight: &HashSet<usize>) -> String {
    let mut out = String::from("digraph {\n");
    for v in 0..g.n() {
        let attrs = if highlight.contains(&v) {
            " [style=filled, fillcolor=lightblue]"
        } else {
            ""
        };
        out.push_str(&format!("  {}{};\n", quote(g.label(v)), attrs));
    }
    for &(f, t) in g.edges() {
        out.push_str(&format!("  {} -> {};\n", quote(g.label(f)), quote(g.label(t))));
    }
    out.push_str("}\n");
    out
}

/// Render a product graph with `factor1`/`factor2` node attributes carrying
/// the factor coordinates.
pub fn product_to_dot(p: &ProductGraph, highlight: &HashSet<usize>) -> String {
    let g = &p.graph;
    let mut out = String::from("digraph {\n");
    for v in 0..g.n() {
        let (a, b) = (p.left_of(v), p.right_of(v));
        let mut attrs = format!("factor1={a}, factor2={b}");
        if highlight.contains(&v) {
            attrs.push_str(", style=filled, fillcolor=lightblue");
        }
        out.push_str(&format!("  {} [{}];\n", quote(g.label(v)), attrs));
    }
    for &(f, t) in g.edges() {
        out.push_str(&format!("  {} -> {};\n", quote(g.label(f)), quote(g.label(t))));
    }
    out.push_str("}\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::product::cartesian_product;

    #[test]
    fn dot_contains_labels_and_edges() {
        let g = DiGraph::build(&["a b", "c"], &[("a b", "c")]).unwrap();
        let dot = graph_to_dot(&g, &HashSet::from([1]));
        assert!(dot.contains("\"a b\" -> \"c\";"));
        assert!(dot.contains("fillcolor=lightblue"));
    }

    #[test]
    fn product_dot_has_factor_attributes() {
        let a = DiGraph::build(&["x", "y"], &[("x", "y")]).unwrap();
        let p = cartesian_product(&a, &a).unwrap();
        let dot = product_to_dot(&p, &HashSet::new());
        assert!(dot.contains("\"x|y\" [factor1=0, factor2=1];"));
    }
}
