//! Aggregate analysis report: graph summary, SCC/parent section, matching
//! section, and observer plan, with a schema-stable JSON form and a
//! human-readable table.

use serde::Serialize;

use crate::graph::DiGraph;
use crate::matching::{self, Contraction, MaximumMatching};
use crate::observability::{self, ObserverPlan, ObserverReason};
use crate::structure::{self, ParentClassification, SccDecomposition};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Clone, Debug, Serialize)]
pub struct GraphSummary {
    pub n: usize,
    pub edge_count: usize,
    pub connected: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct SccSection {
    pub components: Vec<Vec<String>>,
    pub condensation_edges: Vec<[usize; 2]>,
    pub parent_sccs: Vec<Vec<String>>,
    pub parent_nodes: Vec<String>,
    pub parent_count: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct MatchingSection {
    pub s_rank: usize,
    pub matched_links: Vec<[String; 2]>,
    pub unmatched_nodes: Vec<String>,
    pub has_spanning_cycle_family: bool,
    pub cycle_family: Option<Vec<Vec<String>>>,
    pub contraction: Option<ContractionSection>,
}

#[derive(Clone, Debug, Serialize)]
pub struct ContractionSection {
    pub kappa: Vec<String>,
    pub neighborhood: Vec<String>,
}

#[derive(Clone, Debug, Serialize)]
pub struct ObserverPlanSection {
    pub observers: Vec<String>,
    pub reasons: Vec<ObserverReasonEntry>,
    pub num_unmatched_covered: usize,
    pub num_parent_sccs_covered: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct ObserverReasonEntry {
    pub node: String,
    pub tags: Vec<String>,
}

#[derive(Clone, Debug, Serialize)]
pub struct AnalysisReport {
    pub schema_version: u32,
    pub graph: GraphSummary,
    pub scc: SccSection,
    pub matching: MatchingSection,
    pub observer_plan: ObserverPlanSection,
}

fn labels(g: &DiGraph, nodes: &[usize]) -> Vec<String> {
    nodes.iter().map(|&v| g.label(v).to_owned()).collect()
}

fn reason_tag(r: &ObserverReason) -> String {
    match r {
        ObserverReason::UnmatchedCover => "UnmatchedCover".to_owned(),
        ObserverReason::ParentSccCover(c) => format!("ParentSccCover({c})"),
    }
}

pub fn analyze(g: &DiGraph) -> AnalysisReport {
    let d: SccDecomposition = structure::scc_decompose(g);
    let p: ParentClassification = structure::classify_parents(g, &d);
    let m: MaximumMatching = matching::maximum_matching(g);
    let cycle_family = matching::extract_cycle_family(g, &m)
        .expect("matching invariant violated")
        .map(|cycles| cycles.iter().map(|c| labels(g, c)).collect());
    let contraction = matching::find_contraction(g).map(|Contraction { kappa, neighborhood }| {
        ContractionSection {
            kappa: labels(g, &kappa),
            neighborhood: labels(g, &neighborhood),
        }
    });
    let plan: ObserverPlan = observability::plan_observers(g);
    let mut condensation_edges = Vec::new();
    for (i, targets) in d.condensation.iter().enumerate() {
        for &j in targets {
            condensation_edges.push([i, j]);
        }
    }
    AnalysisReport {
        schema_version: SCHEMA_VERSION,
        graph: GraphSummary {
            n: g.n(),
            edge_count: g.edge_count(),
            connected: g.is_connected(),
        },
        scc: SccSection {
            components: d.components.iter().map(|c| labels(g, c)).collect(),
            condensation_edges,
            parent_sccs: p.parent_sccs.iter().map(|c| labels(g, c)).collect(),
            parent_nodes: labels(g, &p.parent_nodes),
            parent_count: p.count(),
        },
        matching: MatchingSection {
            s_rank: m.s_rank,
            matched_links: m
                .matched_links
                .iter()
                .map(|&(f, t)| [g.label(f).to_owned(), g.label(t).to_owned()])
                .collect(),
            unmatched_nodes: labels(g, &m.unmatched_nodes),
            has_spanning_cycle_family: m.s_rank == g.n(),
            cycle_family,
            contraction,
        },
        observer_plan: ObserverPlanSection {
            observers: labels(g, &plan.observers),
            reasons: plan
                .reasons
                .iter()
                .map(|(&node, rs)| ObserverReasonEntry {
                    node: g.label(node).to_owned(),
                    tags: rs.iter().map(reason_tag).collect(),
                })
                .collect(),
            num_unmatched_covered: plan.num_unmatched_covered,
            num_parent_sccs_covered: plan.num_parent_sccs_covered,
        },
    }
}

fn join(items: &[String]) -> String {
    items.join(", ")
}

fn set(items: &[String]) -> String {
    format!("{{{}}}", items.join(", "))
}

/// Human-readable rendering; only the JSON form is schema-stable.
pub fn render_table(r: &AnalysisReport) -> String {
    let mut out = String::new();
    out.push_str(&format!(
        "graph: n={} edges={} connected={}\n",
        r.graph.n, r.graph.edge_count, r.graph.connected
    ));
    out.push_str(&format!(
        "sccs ({}): {}\n",
        r.scc.components.len(),
        r.scc.components.iter().map(|c| set(c)).collect::<Vec<_>>().join(" ")
    ));
    out.push_str(&format!(
        "parents: {} parent SCC(s) {}, {} parent node(s) [{}]\n",
        r.scc.parent_sccs.len(),
        r.scc.parent_sccs.iter().map(|c| set(c)).collect::<Vec<_>>().join(" "),
        r.scc.parent_nodes.len(),
        join(&r.scc.parent_nodes)
    ));
    out.push_str(&format!(
        "matching: s_rank={} unmatched=[{}] spanning_cycle_family={}\n",
        r.matching.s_rank,
        join(&r.matching.unmatched_nodes),
        r.matching.has_spanning_cycle_family
    ));
    if let Some(cf) = &r.matching.cycle_family {
        out.push_str(&format!(
            "cycle family: {}\n",
            cf.iter().map(|c| set(c)).collect::<Vec<_>>().join(" ")
        ));
    }
    if let Some(c) = &r.matching.contraction {
        out.push_str(&format!(
            "contraction: kappa={} -> N(kappa)={}\n",
            set(&c.kappa),
            set(&c.neighborhood)
        ));
    }
    out.push_str(&format!(
        "observer plan ({}): [{}]\n",
        r.observer_plan.observers.len(),
        join(&r.observer_plan.observers)
    ));
    for entry in &r.observer_plan.reasons {
        out.push_str(&format!("  {} <- {}\n", entry.node, entry.tags.join(", ")));
    }
    out
}
