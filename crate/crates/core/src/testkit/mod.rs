//! Reference oracles and seeded instance generators.
//!
//! Everything here is deliberately simple and shares no code with the
//! solver's fast paths, so the two can be checked against each other.

mod generate;
mod oracle;

pub use generate::{generate, InstanceSpec, Tag};
pub use oracle::{
    oracle_bellman_ford, oracle_hop_dp, oracle_sssp, walk_weight, OracleResult, ORACLE_HOP_DP_LIMIT,
};

use crate::graph::{Edge, Graph};

/// Converts an integer-weighted graph to `f64`, keeping classes.
pub fn to_f64_graph(g: &Graph<i64>) -> Graph<f64> {
    let edges = g.edges().map(|e| Edge::with_class(e.src, e.dst, e.weight as f64, e.class)).collect();
    Graph::from_edges(g.n(), edges).expect("converted graph is well formed")
}
