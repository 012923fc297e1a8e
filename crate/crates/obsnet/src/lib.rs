//! Structural observability analysis of directed networks built by Cartesian
//! graph product.
//!
//! The library computes the graph-theoretic certificates that decide
//! structural observability — strongly connected components and their parent
//! classification, maximum matchings and unmatched nodes, spanning cycle
//! families, contractions — derives minimal observer-node placements, and
//! cross-validates every structural verdict with a numeric rank test on
//! randomly weighted realizations.

pub mod dot;
pub mod graph;
pub mod matching;
pub mod numeric;
pub mod observability;
pub mod product;
pub mod report;
pub mod structure;

pub use graph::{DiGraph, GraphError, NodeId};
pub use matching::{Contraction, MaximumMatching};
pub use observability::{ObservabilityVerdict, ObserverPlan};
pub use product::ProductGraph;
pub use structure::{ParentClassification, SccDecomposition};
