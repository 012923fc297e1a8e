//! Observer-node planning and structural observability checking.
//!
//! A node set makes a network structurally observable iff (i) every node has
//! a directed path to an observer and (ii) a disjoint family of cycles and
//! output-connected paths spans all nodes. Planning places an observer on
//! every unmatched node of the canonical maximum matching and one
//! representative inside every parent SCC not already covered.

use std::collections::BTreeMap;

use serde::Serialize;
use thiserror::Error;

use crate::graph::DiGraph;
use crate::matching::{self, MaximumMatching};
use crate::product::{cartesian_product, ProductError};
use crate::structure::{self, ParentClassification, SccDecomposition};

#[derive(Debug, Error)]
pub enum ObservabilityError {
    #[error("observer index {0} is not a node of the graph")]
    UnknownObserver(usize),
}

/// Why a node was placed in an observer plan.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum ObserverReason {
    /// The node is unmatched in the canonical maximum matching.
    UnmatchedCover,
    /// The node covers the parent SCC with this component index.
    ParentSccCover(usize),
}

#[derive(Clone, Debug)]
pub struct ObserverPlan {
    /// Observer node indices, ascending.
    pub observers: Vec<usize>,
    pub reasons: BTreeMap<usize, Vec<ObserverReason>>,
    pub num_unmatched_covered: usize,
    pub num_parent_sccs_covered: usize,
}

/// First failing condition of the structural observability test.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum FailedCondition {
    /// Witness node with no directed path to any observer.
    OutputConnectivity { witness: usize },
    /// Number of nodes left uncovered by the best disjoint cycle/output-path
    /// family.
    SpanningDeficiency { uncovered: usize },
}

#[derive(Clone, Debug)]
pub struct ObservabilityVerdict {
    pub observable: bool,
    pub failed_condition: Option<FailedCondition>,
}

/// Observers required for structural observability: all unmatched nodes of
/// the canonical matching plus, for every parent SCC without one, its
/// smallest node. Parent nodes need no separate handling: they have no
/// outgoing link, hence are unmatched.
pub fn plan_observers(g: &DiGraph) -> ObserverPlan {
    let m = matching::maximum_matching(g);
    let d = structure::scc_decompose(g);
    let p = structure::classify_parents(g, &d);
    plan_from_parts(&m, &d, &p)
}

pub(crate) fn plan_from_parts(
    m: &MaximumMatching,
    d: &SccDecomposition,
    p: &ParentClassification,
) -> ObserverPlan {
    let mut reasons: BTreeMap<usize, Vec<ObserverReason>> = BTreeMap::new();
    for &u in &m.unmatched_nodes {
        reasons.entry(u).or_default().push(ObserverReason::UnmatchedCover);
    }
    let mut sccs_covered = 0;
    for scc in &p.parent_sccs {
        let comp_idx = d.component_of[scc[0]];
        // smallest unmatched node already inside, else the smallest node
        let covering = scc
            .iter()
            .copied()
            .find(|u| reasons.contains_key(u))
            .unwrap_or(scc[0]);
        reasons
            .entry(covering)
            .or_default()
            .push(ObserverReason::ParentSccCover(comp_idx));
        sccs_covered += 1;
    }
    ObserverPlan {
        observers: reasons.keys().copied().collect(),
        num_unmatched_covered: m.unmatched_nodes.len(),
        num_parent_sccs_covered: sccs_covered,
        reasons,
    }
}

/// Check the two structural observability conditions for a given observer
/// set. Condition (i) by reverse reachability from the observers; condition
/// (ii) by maximum matching on the bipartite representation augmented with
/// one virtual sink per observer (each observer may terminate at most one
/// output-connected path).
pub fn check_observable(
    g: &DiGraph,
    observers: &[usize],
) -> Result<ObservabilityVerdict, ObservabilityError> {
    let n = g.n();
    let mut is_observer = vec![false; n];
    for &o in observers {
        if o >= n {
            return Err(ObservabilityError::UnknownObserver(o));
        }
        is_observer[o] = true;
    }
    let obs: Vec<usize> = (0..n).filter(|&v| is_observer[v]).collect();

    // (i) every node must reach an observer: BFS along reversed edges
    let mut reaches = is_observer.clone();
    let mut stack = obs.clone();
    while let Some(v) = stack.pop() {
        for &w in g.in_neighbors(v) {
            if !reaches[w] {
                reaches[w] = true;
                stack.push(w);
            }
        }
    }
    if let Some(witness) = (0..n).find(|&v| !reaches[v]) {
        return Ok(ObservabilityVerdict {
            observable: false,
            failed_condition: Some(FailedCondition::OutputConnectivity { witness }),
        });
    }

    // (ii) augmented matching must cover all n left copies
    let size = spanning_family_cover(g, &obs);
    if size < n {
        return Ok(ObservabilityVerdict {
            observable: false,
            failed_condition: Some(FailedCondition::SpanningDeficiency { uncovered: n - size }),
        });
    }
    Ok(ObservabilityVerdict { observable: true, failed_condition: None })
}

/// Size of the best disjoint cycle/output-path family, as the maximum
/// matching on the bipartite representation augmented with one virtual sink
/// per observer. Condition (ii) holds iff this covers all n nodes.
pub fn spanning_family_cover(g: &DiGraph, observers: &[usize]) -> usize {
    let n = g.n();
    let mut adj: Vec<Vec<usize>> = (0..n).map(|v| g.out_neighbors(v).to_vec()).collect();
    for (k, &o) in observers.iter().enumerate() {
        adj[o].push(n + k);
    }
    let (size, _, _) = matching::hopcroft_karp(n, n + observers.len(), &adj);
    size
}

/// True iff a disjoint family of cycles and observer-terminated paths spans
/// all nodes.
pub fn has_spanning_family(g: &DiGraph, observers: &[usize]) -> bool {
    spanning_family_cover(g, observers) == g.n()
}

/// Product-level recovery report comparing the factors with their Cartesian
/// product: spanning-cycle verdicts, unmatched sets, parent counts and the
/// product formula, and planned observer counts.
#[derive(Clone, Debug, Serialize)]
pub struct ProductRecoveryReport {
    pub factor1_s_rank: usize,
    pub factor2_s_rank: usize,
    pub factor1_spanning_cycle_family: bool,
    pub factor2_spanning_cycle_family: bool,
    pub factor1_unmatched: Vec<String>,
    pub factor2_unmatched: Vec<String>,
    pub product_n: usize,
    pub product_s_rank: usize,
    pub product_unmatched: Vec<String>,
    pub factor1_parent_count: usize,
    pub factor2_parent_count: usize,
    pub product_parent_count: usize,
    pub parent_product_formula_holds: bool,
    pub factor1_observer_count: usize,
    pub factor2_observer_count: usize,
    pub product_observer_count: usize,
    /// True iff some factor has unmatched nodes while the product has none.
    pub recovered: bool,
}

pub fn verify_product_recovery(
    g1: &DiGraph,
    g2: &DiGraph,
) -> Result<ProductRecoveryReport, ProductError> {
    let p = cartesian_product(g1, g2)?;
    let m1 = matching::maximum_matching(g1);
    let m2 = matching::maximum_matching(g2);
    let mc = matching::maximum_matching(&p.graph);
    let pc1 = structure::count_parents(g1);
    let pc2 = structure::count_parents(g2);
    let pcc = structure::count_parents(&p.graph);
    let labels = |g: &DiGraph, nodes: &[usize]| -> Vec<String> {
        nodes.iter().map(|&v| g.label(v).to_owned()).collect()
    };
    Ok(ProductRecoveryReport {
        factor1_s_rank: m1.s_rank,
        factor2_s_rank: m2.s_rank,
        factor1_spanning_cycle_family: m1.s_rank == g1.n(),
        factor2_spanning_cycle_family: m2.s_rank == g2.n(),
        factor1_unmatched: labels(g1, &m1.unmatched_nodes),
        factor2_unmatched: labels(g2, &m2.unmatched_nodes),
        product_n: p.graph.n(),
        product_s_rank: mc.s_rank,
        product_unmatched: labels(&p.graph, &mc.unmatched_nodes),
        factor1_parent_count: pc1,
        factor2_parent_count: pc2,
        product_parent_count: pcc,
        parent_product_formula_holds: pcc == pc1 * pc2,
        factor1_observer_count: plan_observers(g1).observers.len(),
        factor2_observer_count: plan_observers(g2).observers.len(),
        product_observer_count: plan_observers(&p.graph).observers.len(),
        recovered: (!m1.unmatched_nodes.is_empty() || !m2.unmatched_nodes.is_empty())
            && mc.unmatched_nodes.is_empty(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::DiGraph;
    use crate::product::cartesian_product;

    fn g1() -> DiGraph {
        DiGraph::build(&["1", "2", "3"], &[("1", "2"), ("3", "2")]).unwrap()
    }

    fn g2() -> DiGraph {
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

    fn gc() -> DiGraph {
        cartesian_product(&g1(), &g2()).unwrap().graph
    }

    fn by_labels(g: &DiGraph, labels: &[&str]) -> Vec<usize> {
        labels.iter().map(|l| g.node_by_label(l).unwrap()).collect()
    }

    #[test]
    fn plan_for_g2_covers_each_parent_scc() {
        let g = g2();
        let plan = plan_observers(&g);
        assert_eq!(plan.observers, by_labels(&g, &["1", "3", "6"]));
        assert_eq!(plan.num_unmatched_covered, 0);
        assert_eq!(plan.num_parent_sccs_covered, 3);
    }

    #[test]
    fn plan_for_product_matches_paper_observers() {
        let g = gc();
        let plan = plan_observers(&g);
        assert_eq!(plan.observers, by_labels(&g, &["2|1", "2|3", "2|6"]));
    }

    #[test]
    fn single_self_loop_node_plan() {
        let g = DiGraph::build(&["a"], &[("a", "a")]).unwrap();
        let plan = plan_observers(&g);
        assert_eq!(plan.observers, vec![0]);
        assert_eq!(
            plan.reasons[&0],
            vec![ObserverReason::ParentSccCover(0)]
        );
    }

    #[test]
    fn paper_observer_set_is_observable() {
        let g = gc();
        let v = check_observable(&g, &by_labels(&g, &["2|1", "2|3", "2|6"])).unwrap();
        assert!(v.observable);
    }

    #[test]
    fn dropping_a_parent_scc_observer_breaks_output_connectivity() {
        let g = gc();
        let v = check_observable(&g, &by_labels(&g, &["2|1", "2|3"])).unwrap();
        match v.failed_condition {
            Some(FailedCondition::OutputConnectivity { witness }) => {
                // witness lies in the parent SCC lifted from {6}
                assert!(g.label(witness).ends_with("|6"));
            }
            other => panic!("expected output-connectivity failure, got {other:?}"),
        }
    }

    #[test]
    fn g1_single_observer_spanning_deficiency() {
        let g = g1();
        let v = check_observable(&g, &by_labels(&g, &["2"])).unwrap();
        assert_eq!(
            v.failed_condition,
            Some(FailedCondition::SpanningDeficiency { uncovered: 1 })
        );
    }

    #[test]
    fn unknown_observer_rejected() {
        let err = check_observable(&g1(), &[7]).unwrap_err();
        assert!(matches!(err, ObservabilityError::UnknownObserver(7)));
    }

    #[test]
    fn planned_observers_pass_the_checker() {
        for g in [g1(), g2(), gc()] {
            let plan = plan_observers(&g);
            assert!(check_observable(&g, &plan.observers).unwrap().observable);
        }
    }

    #[test]
    fn recovery_report_for_paper_pair() {
        let r = verify_product_recovery(&g1(), &g2()).unwrap();
        assert_eq!(r.product_n, 18);
        assert!(r.product_unmatched.is_empty());
        assert_eq!(r.factor1_parent_count, 1);
        assert_eq!(r.factor2_parent_count, 3);
        assert_eq!(r.product_parent_count, 3);
        assert!(r.parent_product_formula_holds);
        assert!(r.recovered);
        assert_eq!(r.product_observer_count, 3);
    }

    #[test]
    fn cycle_product_nothing_to_recover() {
        let c = DiGraph::build(&["a", "b", "c"], &[("a", "b"), ("b", "c"), ("c", "a")]).unwrap();
        let r = verify_product_recovery(&c, &c).unwrap();
        assert!(!r.recovered);
        assert!(r.product_unmatched.is_empty());
    }
}
