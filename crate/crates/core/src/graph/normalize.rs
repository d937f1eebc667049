//! Rewrites an arbitrary graph into the form the elimination pipeline
//! assumes, without changing distances between original vertices:
//!
//! 1. a vertex with a negative out-edge has no other out-edge;
//! 2. every vertex has degree at most `ceil(4m/n)`;
//! 3. `m >= 2n`.
//!
//! Original vertices keep their ids; auxiliary vertices are appended.

use super::{Edge, EdgeClass, Graph, VertexId};
use crate::weight::Weight;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NormalizationMap {
    forward: Vec<VertexId>,
    back: Vec<Option<VertexId>>,
}

impl NormalizationMap {
    pub fn identity(n: usize) -> Self {
        NormalizationMap { forward: (0..n).collect(), back: (0..n).map(Some).collect() }
    }

    pub fn original_n(&self) -> usize {
        self.forward.len()
    }

    pub fn normalized_n(&self) -> usize {
        self.back.len()
    }

    pub fn to_normalized(&self, v: VertexId) -> VertexId {
        self.forward[v]
    }

    /// `None` for auxiliary vertices.
    pub fn to_original(&self, u: VertexId) -> Option<VertexId> {
        self.back[u]
    }
}

pub fn degree_bound(n: usize, m: usize) -> usize {
    if n == 0 {
        0
    } else {
        (4 * m).div_ceil(n)
    }
}

impl<W: Weight> Graph<W> {
    /// Checks the three normal-form conditions listed in the module docs.
    pub fn is_normalized(&self) -> bool {
        let n = self.n();
        if n == 0 {
            return true;
        }
        if self.m() < 2 * n {
            return false;
        }
        let bound = degree_bound(n, self.m());
        let single_out = self.negative_edge_ids().iter().all(|&e| self.out_degree(self.src(e)) == 1);
        single_out && (0..n).all(|v| self.degree(v) <= bound)
    }
}

struct Builder<W> {
    edges: Vec<Edge<W>>,
    back: Vec<Option<VertexId>>,
}

impl<W: Weight> Builder<W> {
    fn fresh(&mut self) -> VertexId {
        self.back.push(None);
        self.back.len() - 1
    }

    fn n(&self) -> usize {
        self.back.len()
    }

    fn zero_edge(&mut self, u: VertexId, v: VertexId) {
        self.edges.push(Edge::with_class(u, v, W::ZERO, EdgeClass::NonNegative));
    }
}

pub fn normalize<W: Weight>(g: &Graph<W>) -> (Graph<W>, NormalizationMap) {
    let n = g.n();
    if g.is_normalized() {
        return (g.clone(), NormalizationMap::identity(n));
    }
    let mut b = Builder { edges: Vec::with_capacity(g.m() * 2), back: (0..n).map(Some).collect() };

    // Negative edges move onto private tails: u -0-> u' -w-> a.
    for u in 0..n {
        let ids = g.out_edge_ids(u);
        let multi = ids.len() > 1;
        for e in ids {
            let edge = g.edge(e);
            if multi && edge.class == EdgeClass::Negative {
                let tail = b.fresh();
                b.zero_edge(u, tail);
                b.edges.push(Edge { src: tail, ..edge });
            } else {
                b.edges.push(edge);
            }
        }
    }

    let bound = degree_bound(b.n(), b.edges.len()).max(8);
    split_high_degree(&mut b, bound);
    pad_density(&mut b, bound);

    let back = b.back;
    let graph = Graph::from_edges(back.len(), b.edges).expect("normalized graph is well formed");
    (graph, NormalizationMap { forward: (0..n).collect(), back })
}

/// Replaces every vertex of degree > `bound` by fan trees of 0-weight
/// copies, each side of the root keeping at most `bound / 2` edges.
fn split_high_degree<W: Weight>(b: &mut Builder<W>, bound: usize) {
    let half = bound / 2;
    let n0 = b.n();
    let mut outs: Vec<Vec<usize>> = vec![Vec::new(); n0];
    let mut ins: Vec<Vec<usize>> = vec![Vec::new(); n0];
    for (i, e) in b.edges.iter().enumerate() {
        outs[e.src].push(i);
        ins[e.dst].push(i);
    }
    for v in 0..n0 {
        if outs[v].len() + ins[v].len() <= bound {
            continue;
        }
        if outs[v].len() > half {
            // Leaves are edge indices whose src gets rewritten to a copy.
            let mut level: Vec<Result<usize, VertexId>> = outs[v].iter().map(|&i| Ok(i)).collect();
            while level.len() > half {
                let mut next = Vec::with_capacity(level.len().div_ceil(half));
                for chunk in level.chunks(half) {
                    let c = b.fresh();
                    for item in chunk {
                        match *item {
                            Ok(i) => b.edges[i].src = c,
                            Err(child) => b.zero_edge(c, child),
                        }
                    }
                    next.push(Err(c));
                }
                level = next;
            }
            for item in level {
                if let Err(child) = item {
                    b.zero_edge(v, child);
                }
            }
        }
        if ins[v].len() > half {
            let mut level: Vec<Result<usize, VertexId>> = ins[v].iter().map(|&i| Ok(i)).collect();
            while level.len() > half {
                let mut next = Vec::with_capacity(level.len().div_ceil(half));
                for chunk in level.chunks(half) {
                    let c = b.fresh();
                    for item in chunk {
                        match *item {
                            Ok(i) => b.edges[i].dst = c,
                            Err(child) => b.zero_edge(child, c),
                        }
                    }
                    next.push(Err(c));
                }
                level = next;
            }
            for item in level {
                if let Err(child) = item {
                    b.zero_edge(child, v);
                }
            }
        }
    }
}

/// Appends isolated 0-weight complete DAGs on `bound + 1` vertices until
/// `m >= 2n` and `ceil(4m/n) >= bound`. Each gadget vertex has degree
/// exactly `bound`, and the gadgets are unreachable from original vertices.
fn pad_density<W: Weight>(b: &mut Builder<W>, bound: usize) {
    while b.edges.len() < 2 * b.n() || degree_bound(b.n(), b.edges.len()) < bound {
        let first = b.n();
        for _ in 0..=bound {
            b.fresh();
        }
        for i in first..b.n() {
            for j in i + 1..b.n() {
                b.zero_edge(i, j);
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn splits_vertex_with_negative_and_other_out_edges() {
        // u=0 -> a=1 (-1), u -> b=2 (+2)
        let g = Graph::from_weighted_edges(3, [(0, 1, -1i64), (0, 2, 2)]).unwrap();
        let (h, map) = normalize(&g);
        assert!(h.is_normalized());
        assert_eq!(map.to_original(3), None);
        // The negative edge now leaves the auxiliary tail 3.
        let neg: Vec<_> = h.negative_edge_ids().iter().map(|&e| h.edge(e)).collect();
        assert_eq!(neg, vec![Edge::with_class(3, 1, -1, EdgeClass::Negative)]);
        assert!(h.edges().any(|e| e == Edge::with_class(0, 3, 0, EdgeClass::NonNegative)));
        assert!(h.edges().any(|e| e == Edge::with_class(0, 2, 2, EdgeClass::NonNegative)));
    }

    #[test]
    fn already_normalized_graph_is_unchanged() {
        // Two disjoint complete DAGs on 5 vertices: m = 20, n = 10, degrees 4 <= 8.
        let mut edges = vec![];
        for base in [0usize, 5] {
            for i in 0..5 {
                for j in i + 1..5 {
                    edges.push((base + i, base + j, (i + j) as i64));
                }
            }
        }
        let g = Graph::from_weighted_edges(10, edges).unwrap();
        assert!(g.is_normalized());
        let (h, map) = normalize(&g);
        assert_eq!(g, h);
        assert_eq!(map, NormalizationMap::identity(10));
    }

    #[test]
    fn star_center_is_split() {
        let n = 40;
        let edges: Vec<_> = (1..n).map(|v| (0usize, v, v as i64)).collect();
        let g = Graph::from_weighted_edges(n, edges).unwrap();
        let (h, _) = normalize(&g);
        assert!(h.is_normalized());
        assert!(h.degree(0) < n - 1);
    }

    #[test]
    fn empty_and_tiny_graphs() {
        let (h, _) = normalize(&Graph::<i64>::empty(0));
        assert_eq!(h.n(), 0);
        let (h, map) = normalize(&Graph::<i64>::empty(1));
        assert!(h.is_normalized());
        assert_eq!(map.original_n(), 1);
        assert_eq!(map.to_normalized(0), 0);
    }
}
