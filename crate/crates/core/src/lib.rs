//! Single-source shortest paths on directed graphs with negative real edge
//! weights.
//!
//! The solver repeatedly finds a valid price function that makes a batch of
//! negative edges nonnegative, until none remain, and finishes with
//! Dijkstra. Each batch combines sampling-based betweenness reduction, a
//! randomized search for a negative sandwich or a 1-hop independent set, and
//! elimination of a remote edge set through a layered hop-reduction graph.
//!
//! ```
//! use negsssp::{solve_sssp, Dist, Graph, SsspResult};
//!
//! let g = Graph::from_weighted_edges(3, [(0, 1, -2i64), (1, 2, 1)]).unwrap();
//! let res = solve_sssp(&g, 0, 7).unwrap();
//! assert_eq!(
//!     res,
//!     SsspResult::Distances(vec![Dist::Finite(0), Dist::Finite(-2), Dist::Finite(-1)])
//! );
//! ```

pub mod betweenness;
pub mod error;
pub mod graph;
mod heap;
pub mod hoplimited;
pub mod hopreduction;
pub mod io;
mod par;
pub mod sandwich;
pub mod solver;
pub mod testkit;
pub mod weight;

pub use error::{Error, Result};
pub use graph::{normalize, Edge, EdgeClass, EdgeId, Graph, NormalizationMap, PriceFunction, VertexId};
pub use par::is_parallel;
pub use solver::{solve_sssp, solve_sssp_with, SolverConfig, SolverStats, SsspResult};
pub use weight::{Dist, Weight};

/// Returned in place of a result when the input contains a negative cycle.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct NegativeCycle;

impl std::fmt::Display for NegativeCycle {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str("negative cycle")
    }
}
