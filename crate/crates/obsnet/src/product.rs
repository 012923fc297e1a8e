//! Cartesian product of two directed graphs.
//!
//! Composite node (a, b) gets label `a|b` and dense index `a * n2 + b`
//! (row-major over factor indices), so node ordering is deterministic and
//! matrices built from the product are reproducible.

use thiserror::Error;

use crate::graph::{DiGraph, GraphError};

pub const LABEL_SEPARATOR: char = '|';

#[derive(Debug, Error)]
pub enum ProductError {
    #[error("factor graph has no nodes")]
    EmptyFactor,
    #[error("factor label `{0}` contains the composite separator `|`")]
    LabelCollision(String),
    #[error("product graphs have different sizes ({0} vs {1})")]
    SizeMismatch(usize, usize),
    #[error(transparent)]
    Graph(#[from] GraphError),
}

/// A Cartesian product graph together with the composite-to-factor maps.
#[derive(Clone, Debug)]
pub struct ProductGraph {
    pub graph: DiGraph,
    left_of: Vec<usize>,
    right_of: Vec<usize>,
    n1: usize,
    n2: usize,
}

impl ProductGraph {
    /// Factor-1 index of a composite node.
    pub fn left_of(&self, node: usize) -> usize {
        self.left_of[node]
    }

    /// Factor-2 index of a composite node.
    pub fn right_of(&self, node: usize) -> usize {
        self.right_of[node]
    }

    pub fn composite_index(&self, a: usize, b: usize) -> usize {
        a * self.n2 + b
    }

    pub fn factor_sizes(&self) -> (usize, usize) {
        (self.n1, self.n2)
    }
}

/// Node set is V1 x V2; edge (a,b) -> (a',b') exists iff
/// a = a' and b -> b' in E2, or b = b' and a -> a' in E1.
pub fn cartesian_product(g1: &DiGraph, g2: &DiGraph) -> Result<ProductGraph, ProductError> {
    if g1.n() == 0 || g2.n() == 0 {
        return Err(ProductError::EmptyFactor);
    }
    for l in g1.labels().iter().chain(g2.labels()) {
        if l.contains(LABEL_SEPARATOR) {
            return Err(ProductError::LabelCollision(l.clone()));
        }
    }
    let (n1, n2) = (g1.n(), g2.n());
    let mut labels = Vec::with_capacity(n1 * n2);
    let mut left_of = Vec::with_capacity(n1 * n2);
    let mut right_of = Vec::with_capacity(n1 * n2);
    for a in 0..n1 {
        for b in 0..n2 {
            labels.push(format!("{}{}{}", g1.label(a), LABEL_SEPARATOR, g2.label(b)));
            left_of.push(a);
            right_of.push(b);
        }
    }
    let mut edges = Vec::with_capacity(n1 * g2.edge_count() + n2 * g1.edge_count());
    for a in 0..n1 {
        for &(b, b2) in g2.edges() {
            edges.push((a * n2 + b, a * n2 + b2));
        }
    }
    for b in 0..n2 {
        for &(a, a2) in g1.edges() {
            edges.push((a * n2 + b, a2 * n2 + b));
        }
    }
    // Self-loops at (a, b) arise from both factor rules when a and b each
    // carry one; the edge set is a set, so collapse them.
    edges.sort_unstable();
    edges.dedup();
    let graph = DiGraph::from_parts(labels, edges)?;
    Ok(ProductGraph { graph, left_of, right_of, n1, n2 })
}

/// True iff the label-swap map `a|b -> b|a` is an isomorphism between
/// g1 [] g2 and g2 [] g1. Test helper for the commutativity property.
pub fn is_isomorphic_swap(p12: &ProductGraph, p21: &ProductGraph) -> Result<bool, ProductError> {
    if p12.graph.n() != p21.graph.n() {
        return Err(ProductError::SizeMismatch(p12.graph.n(), p21.graph.n()));
    }
    let n = p12.graph.n();
    let mut map = vec![usize::MAX; n];
    for (v, slot) in map.iter_mut().enumerate() {
        let (a, b) = (p12.left_of(v), p12.right_of(v));
        *slot = p21.composite_index(b, a);
        let swapped = p12.graph.label(v).split_once(LABEL_SEPARATOR).map(|(x, y)| format!("{y}|{x}"));
        if swapped.as_deref() != Some(p21.graph.label(*slot)) {
            return Ok(false);
        }
    }
    if p12.graph.edge_count() != p21.graph.edge_count() {
        return Ok(false);
    }
    Ok(p12
        .graph
        .edges()
        .iter()
        .all(|&(f, t)| p21.graph.has_edge(map[f], map[t])))
}
