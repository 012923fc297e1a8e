//! Maximum matching on the bipartite start/end representation of a digraph,
//! unmatched-node extraction, structural rank, spanning-cycle-family
//! detection, and contraction discovery.
//!
//! Bipartite model: left copy of every node as a potential start, right copy
//! as a potential end, one bipartite edge per directed edge (self-loops
//! included). A node is matched when it is the start node of a matched link;
//! delta-M is the set of unmatched nodes and |delta-M| = n - s_rank.

use std::collections::VecDeque;

use thiserror::Error;

use crate::graph::DiGraph;

#[derive(Debug, Error)]
pub enum MatchingError {
    #[error("matched links do not form a permutation over {0} nodes")]
    NotAPermutation(usize),
}

/// One canonical maximum matching with deterministic ascending-index
/// tie-breaking. Other maximum matchings (and hence other unmatched sets)
/// may exist; downstream observer plans are one valid choice.
#[derive(Clone, Debug)]
pub struct MaximumMatching {
    /// Matched links as (start, end), sorted by start node.
    pub matched_links: Vec<(usize, usize)>,
    /// Start nodes of matched links, ascending.
    pub matched_nodes: Vec<usize>,
    /// delta-M: nodes that start no matched link, ascending.
    pub unmatched_nodes: Vec<usize>,
    /// Structural rank of the adjacency pattern = |matched_links|.
    pub s_rank: usize,
    pair_right: Vec<Option<usize>>,
}

/// A node set whose out-neighborhood is strictly smaller, certifying
/// structural rank deficiency.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Contraction {
    pub kappa: Vec<usize>,
    pub neighborhood: Vec<usize>,
}

/// Hopcroft-Karp on an explicit bipartite adjacency (left index -> ascending
/// right indices). Deterministic: BFS/DFS sweep left nodes and their
/// adjacency in ascending order. Returns (size, pair_left, pair_right).
pub(crate) fn hopcroft_karp(
    n_left: usize,
    n_right: usize,
    adj: &[Vec<usize>],
) -> (usize, Vec<Option<usize>>, Vec<Option<usize>>) {
    debug_assert_eq!(adj.len(), n_left);
    let mut pair_left: Vec<Option<usize>> = vec![None; n_left];
    let mut pair_right: Vec<Option<usize>> = vec![None; n_right];
    let mut dist = vec![usize::MAX; n_left];
    let mut size = 0;
    loop {
        // BFS layers from free left nodes
        let mut queue: VecDeque<usize> = VecDeque::new();
        for u in 0..n_left {
            if pair_left[u].is_none() {
                dist[u] = 0;
                queue.push_back(u);
            } else {
                dist[u] = usize::MAX;
            }
        }
        let mut found_free = false;
        while let Some(u) = queue.pop_front() {
            for &v in &adj[u] {
                match pair_right[v] {
                    None => found_free = true,
                    Some(u2) if dist[u2] == usize::MAX => {
                        dist[u2] = dist[u] + 1;
                        queue.push_back(u2);
                    }
                    _ => {}
                }
            }
        }
        if !found_free {
            break;
        }
        fn dfs(
            u: usize,
            adj: &[Vec<usize>],
            pair_left: &mut [Option<usize>],
            pair_right: &mut [Option<usize>],
            dist: &mut [usize],
        ) -> bool {
            let du = std::mem::replace(&mut dist[u], usize::MAX);
            for &v in &adj[u] {
                let ok = match pair_right[v] {
                    None => true,
                    Some(u2) => dist[u2] == du + 1 && dfs(u2, adj, pair_left, pair_right, dist),
                };
                if ok {
                    pair_left[u] = Some(v);
                    pair_right[v] = Some(u);
                    return true;
                }
            }
            false
        }
        for u in 0..n_left {
            if pair_left[u].is_none()
                && dist[u] == 0
                && dfs(u, adj, &mut pair_left, &mut pair_right, &mut dist)
            {
                size += 1;
            }
        }
    }
    (size, pair_left, pair_right)
}

fn bipartite_adj(g: &DiGraph) -> Vec<Vec<usize>> {
    (0..g.n()).map(|v| g.out_neighbors(v).to_vec()).collect()
}

pub fn maximum_matching(g: &DiGraph) -> MaximumMatching {
    let n = g.n();
    let adj = bipartite_adj(g);
    let (size, pair_left, pair_right) = hopcroft_karp(n, n, &adj);
    let matched_links: Vec<(usize, usize)> = pair_left
        .iter()
        .enumerate()
        .filter_map(|(u, p)| p.map(|v| (u, v)))
        .collect();
    let matched_nodes: Vec<usize> = matched_links.iter().map(|&(u, _)| u).collect();
    let unmatched_nodes: Vec<usize> =
        (0..n).filter(|&u| pair_left[u].is_none()).collect();
    debug_assert_eq!(unmatched_nodes.len(), n - size);
    MaximumMatching {
        matched_links,
        matched_nodes,
        unmatched_nodes,
        s_rank: size,
        pair_right,
    }
}

/// A spanning cycle family (vertex-disjoint cycles covering all nodes)
/// exists iff the structural rank is full.
pub fn has_spanning_cycle_family(g: &DiGraph) -> bool {
    maximum_matching(g).s_rank == g.n()
}

/// When the matching is perfect, the matched links form a permutation
/// start -> end whose orbits are a spanning cycle family. Each cycle is
/// reported starting at its smallest node; cycles sorted by that node.
pub fn extract_cycle_family(
    g: &DiGraph,
    m: &MaximumMatching,
) -> Result<Option<Vec<Vec<usize>>>, MatchingError> {
    let n = g.n();
    if m.s_rank < n {
        return Ok(None);
    }
    let mut succ = vec![usize::MAX; n];
    for &(u, v) in &m.matched_links {
        succ[u] = v;
    }
    if succ.contains(&usize::MAX) {
        return Err(MatchingError::NotAPermutation(n));
    }
    let mut seen = vec![false; n];
    let mut cycles = Vec::new();
    for start in 0..n {
        if seen[start] {
            continue;
        }
        let mut cycle = Vec::new();
        let mut v = start;
        loop {
            if seen[v] {
                // permutation orbit must close at `start`
                if v != start {
                    return Err(MatchingError::NotAPermutation(n));
                }
                break;
            }
            seen[v] = true;
            cycle.push(v);
            v = succ[v];
        }
        cycles.push(cycle);
    }
    Ok(Some(cycles))
}

/// Witness of rank deficiency: the left nodes reachable from unmatched left
/// nodes via alternating paths form a set kappa with |N(kappa)| < |kappa|.
/// Returns None iff the matching is perfect (Hall's condition holds).
pub fn find_contraction(g: &DiGraph) -> Option<Contraction> {
    let n = g.n();
    let m = maximum_matching(g);
    if m.s_rank == n {
        return None;
    }
    let mut in_kappa = vec![false; n];
    let mut stack: Vec<usize> = m.unmatched_nodes.clone();
    for &u in &stack {
        in_kappa[u] = true;
    }
    let mut right_seen = vec![false; n];
    while let Some(u) = stack.pop() {
        for &v in g.out_neighbors(u) {
            if !right_seen[v] {
                right_seen[v] = true;
                // v must be matched, else an augmenting path would exist
                if let Some(u2) = m.pair_right[v] {
                    if !in_kappa[u2] {
                        in_kappa[u2] = true;
                        stack.push(u2);
                    }
                }
            }
        }
    }
    let kappa: Vec<usize> = (0..n).filter(|&u| in_kappa[u]).collect();
    let neighborhood: Vec<usize> = (0..n).filter(|&v| right_seen[v]).collect();
    // Sink nodes in kappa contribute nothing to N(kappa); drop them when the
    // pruned set is still a strict violator.
    let pruned: Vec<usize> = kappa
        .iter()
        .copied()
        .filter(|&u| !g.out_neighbors(u).is_empty())
        .collect();
    let kappa = if pruned.len() > neighborhood.len() { pruned } else { kappa };
    debug_assert!(neighborhood.len() < kappa.len());
    Some(Contraction { kappa, neighborhood })
}
