//! Shared fixtures, brute-force oracles, and random graph generators for the
//! integration suites. The oracles are deliberately naive and independent of
//! the library's algorithms.

#![allow(dead_code)]

use obsnet::graph::DiGraph;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// The 3-node factor with a contraction: edges 1->2, 3->2.
pub fn g1() -> DiGraph {
    DiGraph::build(&["1", "2", "3"], &[("1", "2"), ("3", "2")]).unwrap()
}

/// The 6-node factor with a spanning cycle family: self-loops at 1, 2, 5, 6,
/// the 2-cycle 3<->4, and cross edges 2->1, 2->3, 5->4, 5->6.
pub fn g2() -> DiGraph {
    DiGraph::build(
        &["1", "2", "3", "4", "5", "6"],
        &[
            ("1", "1"),
            ("2", "2"),
            ("5", "5"),
            ("6", "6"),
            ("3", "4"),
            ("4", "3"),
            ("2", "1"),
            ("2", "3"),
            ("5", "4"),
            ("5", "6"),
        ],
    )
    .unwrap()
}

pub fn gc() -> DiGraph {
    obsnet::product::cartesian_product(&g1(), &g2()).unwrap().graph
}

pub fn nodes_by_labels(g: &DiGraph, labels: &[&str]) -> Vec<usize> {
    labels.iter().map(|l| g.node_by_label(l).unwrap()).collect()
}

/// Reflexive-transitive closure by Floyd-Warshall.
pub fn reachability(g: &DiGraph) -> Vec<Vec<bool>> {
    let n = g.n();
    let mut reach = vec![vec![false; n]; n];
    for v in 0..n {
        reach[v][v] = true;
        for &w in g.out_neighbors(v) {
            reach[v][w] = true;
        }
    }
    for k in 0..n {
        for i in 0..n {
            if reach[i][k] {
                for j in 0..n {
                    if reach[k][j] {
                        reach[i][j] = true;
                    }
                }
            }
        }
    }
    reach
}

/// SCC partition from mutual reachability: returns for each node the
/// smallest node it is mutually reachable with (a canonical class id).
pub fn scc_classes_oracle(g: &DiGraph) -> Vec<usize> {
    let reach = reachability(g);
    let n = g.n();
    (0..n)
        .map(|v| (0..n).find(|&w| reach[v][w] && reach[w][v]).unwrap())
        .collect()
}

/// Maximum independent link set by memoized exhaustive search over start
/// nodes with a bitmask of used end nodes. Usable for n <= ~16.
pub fn s_rank_oracle(g: &DiGraph) -> usize {
    let n = g.n();
    assert!(n <= 16, "oracle is exponential in n");
    fn rec(
        u: usize,
        used: u32,
        g: &DiGraph,
        memo: &mut std::collections::HashMap<(usize, u32), usize>,
    ) -> usize {
        if u == g.n() {
            return 0;
        }
        if let Some(&v) = memo.get(&(u, used)) {
            return v;
        }
        let mut best = rec(u + 1, used, g, memo);
        for &w in g.out_neighbors(u) {
            if used & (1 << w) == 0 {
                best = best.max(1 + rec(u + 1, used | (1 << w), g, memo));
            }
        }
        memo.insert((u, used), best);
        best
    }
    rec(0, 0, g, &mut std::collections::HashMap::new())
}

/// True iff some node subset has a strictly smaller out-neighborhood,
/// by enumerating all nonempty subsets.
pub fn contraction_exists_oracle(g: &DiGraph) -> bool {
    let n = g.n();
    assert!(n <= 16);
    for mask in 1u32..(1 << n) {
        let mut nbhd = 0u32;
        for v in 0..n {
            if mask & (1 << v) != 0 {
                for &w in g.out_neighbors(v) {
                    nbhd |= 1 << w;
                }
            }
        }
        if (nbhd.count_ones() as i64) < (mask.count_ones() as i64) {
            return true;
        }
    }
    false
}

/// Brute-force search for a disjoint family of cycles and output-connected
/// paths spanning all nodes: assign every node a distinct successor chosen
/// from its out-neighbors, with observers alternatively allowed to terminate
/// a path at their own dedicated output.
pub fn spanning_family_oracle(g: &DiGraph, observers: &[usize]) -> bool {
    let n = g.n();
    assert!(n <= 16);
    let is_observer: Vec<bool> = {
        let mut v = vec![false; n];
        for &o in observers {
            v[o] = true;
        }
        v
    };
    // successor slots: 0..n real end nodes, n + v the private output of v
    fn rec(v: usize, used_ends: u32, used_outputs: u32, g: &DiGraph, is_obs: &[bool]) -> bool {
        let n = g.n();
        if v == n {
            return true;
        }
        for &w in g.out_neighbors(v) {
            if used_ends & (1 << w) == 0
                && rec(v + 1, used_ends | (1 << w), used_outputs, g, is_obs)
            {
                return true;
            }
        }
        if is_obs[v]
            && used_outputs & (1 << v) == 0
            && rec(v + 1, used_ends, used_outputs | (1 << v), g, is_obs)
        {
            return true;
        }
        false
    }
    rec(0, 0, 0, g, &is_observer)
}

fn labels_for(n: usize) -> Vec<String> {
    (0..n).map(|i| i.to_string()).collect()
}

/// Random digraph on n nodes with independent edge probability p.
pub fn random_digraph(rng: &mut ChaCha8Rng, n: usize, p: f64) -> DiGraph {
    let mut edges = Vec::new();
    for f in 0..n {
        for t in 0..n {
            if rng.gen_bool(p) {
                edges.push((f, t));
            }
        }
    }
    DiGraph::from_parts(labels_for(n), edges).unwrap()
}

/// Random weakly connected digraph with 1..=max_n nodes.
pub fn random_connected(rng: &mut ChaCha8Rng, max_n: usize) -> DiGraph {
    loop {
        let n = rng.gen_range(1..=max_n);
        let g = random_digraph(rng, n, 0.35);
        if g.is_connected() {
            return g;
        }
    }
}

/// Random weakly connected digraph that contains a spanning cycle family:
/// a random permutation digraph plus extra random edges (extras never break
/// the family).
pub fn random_spanning_cycle_graph(rng: &mut ChaCha8Rng, max_n: usize) -> DiGraph {
    loop {
        let n = rng.gen_range(1..=max_n);
        let mut perm: Vec<usize> = (0..n).collect();
        for i in (1..n).rev() {
            perm.swap(i, rng.gen_range(0..=i));
        }
        let mut edges: Vec<(usize, usize)> = (0..n).map(|v| (v, perm[v])).collect();
        for f in 0..n {
            for t in 0..n {
                if perm[f] != t && rng.gen_bool(0.2) {
                    edges.push((f, t));
                }
            }
        }
        let g = DiGraph::from_parts(labels_for(n), edges).unwrap();
        if g.is_connected() {
            return g;
        }
    }
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}
