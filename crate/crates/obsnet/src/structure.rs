//! Strongly connected components, condensation DAG, and classification of
//! condensation sinks into parent SCCs and parent nodes.

use std::collections::BinaryHeap;

use crate::graph::DiGraph;

/// SCC membership plus the condensation DAG over component indices.
///
/// Components are numbered in a topological order of the condensation
/// (sources first, parents last), with ties broken by smallest contained
/// node index. Node lists inside each component are sorted ascending.
#[derive(Clone, Debug)]
pub struct SccDecomposition {
    pub component_of: Vec<usize>,
    pub components: Vec<Vec<usize>>,
    /// Adjacency of the condensation: `condensation[i]` lists components j
    /// with some edge crossing from component i to component j, i != j.
    pub condensation: Vec<Vec<usize>>,
}

impl SccDecomposition {
    /// Condensation sinks: components with no outgoing condensation edges.
    pub fn sinks(&self) -> Vec<usize> {
        (0..self.components.len())
            .filter(|&c| self.condensation[c].is_empty())
            .collect()
    }
}

/// Condensation sinks split by the self-loop rule: a sink of two or more
/// nodes, or a singleton with a self-loop, is a parent SCC; a singleton sink
/// without a self-loop is a parent node.
#[derive(Clone, Debug)]
pub struct ParentClassification {
    pub parent_sccs: Vec<Vec<usize>>,
    pub parent_nodes: Vec<usize>,
}

impl ParentClassification {
    pub fn count(&self) -> usize {
        self.parent_sccs.len() + self.parent_nodes.len()
    }
}

struct TarjanState {
    counter: usize,
    index: Vec<Option<usize>>,
    low: Vec<usize>,
    on_stack: Vec<bool>,
    stack: Vec<usize>,
    comps: Vec<Vec<usize>>,
}

// Iterative Tarjan; the explicit frame stack keeps large products from
// blowing the call stack.
fn tarjan(g: &DiGraph) -> Vec<Vec<usize>> {
    let n = g.n();
    let mut st = TarjanState {
        counter: 0,
        index: vec![None; n],
        low: vec![0; n],
        on_stack: vec![false; n],
        stack: Vec::new(),
        comps: Vec::new(),
    };
    let mut frames: Vec<(usize, usize)> = Vec::new();
    for root in 0..n {
        if st.index[root].is_some() {
            continue;
        }
        frames.push((root, 0));
        while let Some(&mut (v, ref mut ei)) = frames.last_mut() {
            if *ei == 0 {
                st.index[v] = Some(st.counter);
                st.low[v] = st.counter;
                st.counter += 1;
                st.stack.push(v);
                st.on_stack[v] = true;
            }
            let succ = g.out_neighbors(v);
            let mut descended = false;
            while *ei < succ.len() {
                let w = succ[*ei];
                *ei += 1;
                match st.index[w] {
                    None => {
                        frames.push((w, 0));
                        descended = true;
                        break;
                    }
                    Some(wi) if st.on_stack[w] => st.low[v] = st.low[v].min(wi),
                    _ => {}
                }
            }
            if descended {
                continue;
            }
            if st.low[v] == st.index[v].unwrap() {
                let mut comp = Vec::new();
                loop {
                    let w = st.stack.pop().expect("tarjan stack underflow");
                    st.on_stack[w] = false;
                    comp.push(w);
                    if w == v {
                        break;
                    }
                }
                comp.sort_unstable();
                st.comps.push(comp);
            }
            frames.pop();
            if let Some(&mut (p, _)) = frames.last_mut() {
                st.low[p] = st.low[p].min(st.low[v]);
            }
        }
    }
    st.comps
}

pub fn scc_decompose(g: &DiGraph) -> SccDecomposition {
    let n = g.n();
    let comps = tarjan(g);
    let k = comps.len();
    let mut comp_of_raw = vec![0; n];
    for (c, comp) in comps.iter().enumerate() {
        for &v in comp {
            comp_of_raw[v] = c;
        }
    }
    // raw condensation edges
    let mut raw_adj = vec![Vec::new(); k];
    let mut indeg = vec![0usize; k];
    for &(f, t) in g.edges() {
        let (cf, ct) = (comp_of_raw[f], comp_of_raw[t]);
        if cf != ct && !raw_adj[cf].contains(&ct) {
            raw_adj[cf].push(ct);
            indeg[ct] += 1;
        }
    }
    // Kahn with a min-heap on smallest contained node: deterministic
    // topological numbering, parents last.
    let mut heap: BinaryHeap<std::cmp::Reverse<(usize, usize)>> = (0..k)
        .filter(|&c| indeg[c] == 0)
        .map(|c| std::cmp::Reverse((comps[c][0], c)))
        .collect();
    let mut order = Vec::with_capacity(k);
    let mut new_id = vec![usize::MAX; k];
    while let Some(std::cmp::Reverse((_, c))) = heap.pop() {
        new_id[c] = order.len();
        order.push(c);
        for &d in &raw_adj[c] {
            indeg[d] -= 1;
            if indeg[d] == 0 {
                heap.push(std::cmp::Reverse((comps[d][0], d)));
            }
        }
    }
    debug_assert_eq!(order.len(), k);
    let components: Vec<Vec<usize>> = order.iter().map(|&c| comps[c].clone()).collect();
    let mut component_of = vec![0; n];
    for (c, comp) in components.iter().enumerate() {
        for &v in comp {
            component_of[v] = c;
        }
    }
    let mut condensation = vec![Vec::new(); k];
    for (c, raw) in raw_adj.iter().enumerate() {
        let mut targets: Vec<usize> = raw.iter().map(|&d| new_id[d]).collect();
        targets.sort_unstable();
        condensation[new_id[c]] = targets;
    }
    SccDecomposition { component_of, components, condensation }
}

pub fn classify_parents(g: &DiGraph, d: &SccDecomposition) -> ParentClassification {
    let mut parent_sccs = Vec::new();
    let mut parent_nodes = Vec::new();
    for c in d.sinks() {
        let comp = &d.components[c];
        if comp.len() >= 2 || g.has_edge(comp[0], comp[0]) {
            parent_sccs.push(comp.clone());
        } else {
            parent_nodes.push(comp[0]);
        }
    }
    parent_sccs.sort_by_key(|c| c[0]);
    parent_nodes.sort_unstable();
    ParentClassification { parent_sccs, parent_nodes }
}

/// Total number of parent SCCs and parent nodes.
pub fn count_parents(g: &DiGraph) -> usize {
    let d = scc_decompose(g);
    classify_parents(g, &d).count()
}
