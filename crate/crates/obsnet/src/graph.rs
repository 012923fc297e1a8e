//! Immutable directed-graph value type with stable node labels.
//!
//! Nodes carry dense 0-based indices internally and user-facing text labels.
//! Edge `a -> b` means "the state of `a` influences the derivative of `b`",
//! so the adjacency pattern places a nonzero at row `b`, column `a`.

use std::collections::HashMap;

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Dense 0-based node index within one graph.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct NodeId(pub usize);

#[derive(Debug, Error)]
pub enum GraphError {
    #[error("duplicate node label `{0}`")]
    DuplicateLabel(String),
    #[error("edge endpoint `{0}` is not a declared node")]
    UnknownEndpoint(String),
    #[error("duplicate edge `{0} -> {1}`")]
    DuplicateEdge(String, String),
    #[error("graph must have at least one node")]
    EmptyGraph,
    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },
}

/// An immutable directed graph. Self-loops permitted, parallel edges not.
#[derive(Clone, Debug)]
pub struct DiGraph {
    labels: Vec<String>,
    index: HashMap<String, usize>,
    edges: Vec<(usize, usize)>,
    out_adj: Vec<Vec<usize>>,
    in_adj: Vec<Vec<usize>>,
}

impl PartialEq for DiGraph {
    fn eq(&self, other: &Self) -> bool {
        self.labels == other.labels && self.edges == other.edges
    }
}
impl Eq for DiGraph {}

impl DiGraph {
    /// Build a graph from labels and label-pair edges, validating all inputs.
    pub fn build<S: AsRef<str>, T: AsRef<str>>(
        node_labels: &[S],
        edges: &[(T, T)],
    ) -> Result<Self, GraphError> {
        let labels: Vec<String> = node_labels.iter().map(|s| s.as_ref().to_owned()).collect();
        let mut index = HashMap::new();
        for (i, l) in labels.iter().enumerate() {
            if index.insert(l.clone(), i).is_some() {
                return Err(GraphError::DuplicateLabel(l.clone()));
            }
        }
        let mut idx_edges = Vec::with_capacity(edges.len());
        for (from, to) in edges {
            let f = *index
                .get(from.as_ref())
                .ok_or_else(|| GraphError::UnknownEndpoint(from.as_ref().to_owned()))?;
            let t = *index
                .get(to.as_ref())
                .ok_or_else(|| GraphError::UnknownEndpoint(to.as_ref().to_owned()))?;
            idx_edges.push((f, t));
        }
        Self::from_parts(labels, idx_edges)
    }

    /// Build from pre-resolved indices. Labels must be unique, edges in range.
    pub fn from_parts(labels: Vec<String>, mut edges: Vec<(usize, usize)>) -> Result<Self, GraphError> {
        if labels.is_empty() {
            return Err(GraphError::EmptyGraph);
        }
        let n = labels.len();
        let mut index = HashMap::new();
        for (i, l) in labels.iter().enumerate() {
            if index.insert(l.clone(), i).is_some() {
                return Err(GraphError::DuplicateLabel(l.clone()));
            }
        }
        if let Some(&(f, t)) = edges.iter().find(|&&(f, t)| f >= n || t >= n) {
            return Err(GraphError::UnknownEndpoint(format!("index ({f}, {t})")));
        }
        edges.sort_unstable();
        for w in edges.windows(2) {
            if w[0] == w[1] {
                return Err(GraphError::DuplicateEdge(
                    labels[w[0].0].clone(),
                    labels[w[0].1].clone(),
                ));
            }
        }
        let mut out_adj = vec![Vec::new(); n];
        let mut in_adj = vec![Vec::new(); n];
        for &(f, t) in &edges {
            out_adj[f].push(t);
            in_adj[t].push(f);
        }
        for l in in_adj.iter_mut() {
            l.sort_unstable();
        }
        Ok(DiGraph { labels, index, edges, out_adj, in_adj })
    }

    pub fn n(&self) -> usize {
        self.labels.len()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn label(&self, node: usize) -> &str {
        &self.labels[node]
    }

    pub fn node_by_label(&self, label: &str) -> Option<usize> {
        self.index.get(label).copied()
    }

    /// Edges as index pairs, sorted ascending.
    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    /// Out-neighbors of `node`, ascending.
    pub fn out_neighbors(&self, node: usize) -> &[usize] {
        &self.out_adj[node]
    }

    /// In-neighbors of `node`, ascending.
    pub fn in_neighbors(&self, node: usize) -> &[usize] {
        &self.in_adj[node]
    }

    pub fn has_edge(&self, from: usize, to: usize) -> bool {
        self.out_adj[from].binary_search(&to).is_ok()
    }

    /// Weak connectivity: one component in the underlying undirected graph.
    pub fn is_connected(&self) -> bool {
        let n = self.n();
        let mut seen = vec![false; n];
        let mut stack = vec![0];
        seen[0] = true;
        let mut count = 1;
        while let Some(v) = stack.pop() {
            for &w in self.out_adj[v].iter().chain(self.in_adj[v].iter()) {
                if !seen[w] {
                    seen[w] = true;
                    count += 1;
                    stack.push(w);
                }
            }
        }
        count == n
    }

    /// Boolean structure pattern: edge `a -> b` sets entry (b, a), so that
    /// x' = Ax propagates influence along edge direction.
    pub fn adjacency_pattern(&self) -> Vec<Vec<bool>> {
        let n = self.n();
        let mut pat = vec![vec![false; n]; n];
        for &(f, t) in &self.edges {
            pat[t][f] = true;
        }
        pat
    }

    pub fn to_json_string(&self) -> String {
        let file = GraphFile {
            nodes: self.labels.clone(),
            edges: self
                .edges
                .iter()
                .map(|&(f, t)| [self.labels[f].clone(), self.labels[t].clone()])
                .collect(),
        };
        serde_json::to_string_pretty(&file).expect("graph serialization cannot fail")
    }

    pub fn from_json_str(text: &str) -> Result<Self, GraphError> {
        let file: GraphFile = serde_json::from_str(text).map_err(|e| GraphError::Parse {
            line: e.line(),
            msg: e.to_string(),
        })?;
        let edges: Vec<(&str, &str)> = file
            .edges
            .iter()
            .map(|[f, t]| (f.as_str(), t.as_str()))
            .collect();
        DiGraph::build(&file.nodes, &edges)
    }

    /// Edge-list text: one `from to` pair per line, `#` comments, nodes
    /// inferred in order of first appearance.
    pub fn from_edge_list(text: &str) -> Result<Self, GraphError> {
        let mut labels: Vec<String> = Vec::new();
        let mut index: HashMap<String, usize> = HashMap::new();
        let mut edges: Vec<(usize, usize)> = Vec::new();
        let intern = |s: &str, labels: &mut Vec<String>, index: &mut HashMap<String, usize>| {
            *index.entry(s.to_owned()).or_insert_with(|| {
                labels.push(s.to_owned());
                labels.len() - 1
            })
        };
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let mut parts = line.split_whitespace();
            let (from, to) = match (parts.next(), parts.next(), parts.next()) {
                (Some(f), Some(t), None) => (f, t),
                (Some(f), None, _) => {
                    // single token declares an isolated node
                    intern(f, &mut labels, &mut index);
                    continue;
                }
                _ => {
                    return Err(GraphError::Parse {
                        line: lineno + 1,
                        msg: format!("expected `from to`, got `{line}`"),
                    })
                }
            };
            let f = intern(from, &mut labels, &mut index);
            let t = intern(to, &mut labels, &mut index);
            edges.push((f, t));
        }
        Self::from_parts(labels, edges)
    }

    /// Sniffs JSON vs edge-list by the first non-whitespace character.
    pub fn parse(text: &str) -> Result<Self, GraphError> {
        if text.trim_start().starts_with('{') {
            Self::from_json_str(text)
        } else {
            Self::from_edge_list(text)
        }
    }
}

#[derive(Serialize, Deserialize)]
struct GraphFile {
    nodes: Vec<String>,
    edges: Vec<[String; 2]>,
}
