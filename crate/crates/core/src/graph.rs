//! Directed graphs with a fixed nonnegative/negative edge classification,
//! price functions, and the normal form the elimination pipeline expects.

mod normalize;

use std::fmt;
use std::ops::{Add, Index};
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{contract, Error, Result};
use crate::weight::Weight;

pub use normalize::{normalize, NormalizationMap};

pub type VertexId = usize;
pub type EdgeId = usize;

/// Edge class, fixed when the graph is built.
///
/// Reweighting never moves an edge between classes, so a `Negative` edge may
/// carry a nonnegative weight after a price function has been applied.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum EdgeClass {
    NonNegative,
    Negative,
}

impl EdgeClass {
    pub fn of<W: Weight>(w: W) -> Self {
        if w.is_negative() {
            EdgeClass::Negative
        } else {
            EdgeClass::NonNegative
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Edge<W> {
    pub src: VertexId,
    pub dst: VertexId,
    pub weight: W,
    pub class: EdgeClass,
}

impl<W: Weight> Edge<W> {
    pub fn new(src: VertexId, dst: VertexId, weight: W) -> Self {
        Edge { src, dst, weight, class: EdgeClass::of(weight) }
    }

    pub fn with_class(src: VertexId, dst: VertexId, weight: W, class: EdgeClass) -> Self {
        Edge { src, dst, weight, class }
    }
}

/// Weight-independent structure, shared between a graph and its reweightings.
#[derive(Debug)]
struct Topology {
    n: usize,
    src: Vec<VertexId>,
    dst: Vec<VertexId>,
    class: Vec<EdgeClass>,
    // Edges are stored sorted by (src, dst), so out-edges of v are the
    // contiguous id range out_off[v]..out_off[v + 1].
    out_off: Vec<usize>,
    in_off: Vec<usize>,
    in_idx: Vec<EdgeId>,
    negative: Vec<EdgeId>,
}

impl Topology {
    fn build(n: usize, src: Vec<VertexId>, dst: Vec<VertexId>, class: Vec<EdgeClass>) -> Self {
        let m = src.len();
        let mut out_off = vec![0usize; n + 1];
        let mut in_off = vec![0usize; n + 1];
        for e in 0..m {
            out_off[src[e] + 1] += 1;
            in_off[dst[e] + 1] += 1;
        }
        for v in 0..n {
            out_off[v + 1] += out_off[v];
            in_off[v + 1] += in_off[v];
        }
        let mut in_idx = vec![0usize; m];
        let mut fill = in_off.clone();
        for e in 0..m {
            let v = dst[e];
            in_idx[fill[v]] = e;
            fill[v] += 1;
        }
        let negative = (0..m).filter(|&e| class[e] == EdgeClass::Negative).collect();
        Topology { n, src, dst, class, out_off, in_off, in_idx, negative }
    }
}

#[derive(Clone)]
pub struct Graph<W> {
    topo: Arc<Topology>,
    weights: Vec<W>,
}

impl<W: Weight> Graph<W> {
    /// Builds a graph, classifying each edge by the sign of its weight.
    pub fn from_weighted_edges<I>(n: usize, edges: I) -> Result<Self>
    where
        I: IntoIterator<Item = (VertexId, VertexId, W)>,
    {
        Self::from_edges(n, edges.into_iter().map(|(u, v, w)| Edge::new(u, v, w)).collect())
    }

    /// Builds a graph with explicit classes. The weighting does not have to
    /// be valid; see [`Graph::is_valid_weighting`].
    pub fn from_edges(n: usize, mut edges: Vec<Edge<W>>) -> Result<Self> {
        for (i, e) in edges.iter().enumerate() {
            for v in [e.src, e.dst] {
                if v >= n {
                    return Err(Error::VertexOutOfRange { vertex: v, n });
                }
            }
            if !e.weight.is_admissible() {
                return Err(Error::InadmissibleWeight { edge: i, weight: format!("{:?}", e.weight) });
            }
        }
        edges.sort_by_key(|e| (e.src, e.dst));
        let src = edges.iter().map(|e| e.src).collect();
        let dst = edges.iter().map(|e| e.dst).collect();
        let class = edges.iter().map(|e| e.class).collect();
        let weights = edges.iter().map(|e| e.weight).collect();
        Ok(Graph { topo: Arc::new(Topology::build(n, src, dst, class)), weights })
    }

    pub fn empty(n: usize) -> Self {
        Graph { topo: Arc::new(Topology::build(n, vec![], vec![], vec![])), weights: vec![] }
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.topo.n
    }

    #[inline]
    pub fn m(&self) -> usize {
        self.weights.len()
    }

    #[inline]
    pub fn src(&self, e: EdgeId) -> VertexId {
        self.topo.src[e]
    }

    #[inline]
    pub fn dst(&self, e: EdgeId) -> VertexId {
        self.topo.dst[e]
    }

    #[inline]
    pub fn weight(&self, e: EdgeId) -> W {
        self.weights[e]
    }

    #[inline]
    pub fn class(&self, e: EdgeId) -> EdgeClass {
        self.topo.class[e]
    }

    pub fn edge(&self, e: EdgeId) -> Edge<W> {
        Edge { src: self.src(e), dst: self.dst(e), weight: self.weight(e), class: self.class(e) }
    }

    pub fn edges(&self) -> impl Iterator<Item = Edge<W>> + '_ {
        (0..self.m()).map(move |e| self.edge(e))
    }

    pub fn weights(&self) -> &[W] {
        &self.weights
    }

    #[inline]
    pub fn out_edge_ids(&self, v: VertexId) -> std::ops::Range<EdgeId> {
        self.topo.out_off[v]..self.topo.out_off[v + 1]
    }

    #[inline]
    pub fn in_edge_ids(&self, v: VertexId) -> &[EdgeId] {
        &self.topo.in_idx[self.topo.in_off[v]..self.topo.in_off[v + 1]]
    }

    pub fn out_degree(&self, v: VertexId) -> usize {
        self.topo.out_off[v + 1] - self.topo.out_off[v]
    }

    pub fn in_degree(&self, v: VertexId) -> usize {
        self.topo.in_off[v + 1] - self.topo.in_off[v]
    }

    pub fn degree(&self, v: VertexId) -> usize {
        self.out_degree(v) + self.in_degree(v)
    }

    /// Ids of all edges in the `Negative` class, ascending.
    pub fn negative_edge_ids(&self) -> &[EdgeId] {
        &self.topo.negative
    }

    /// Tails of `Negative`-class edges, ascending and deduplicated.
    pub fn negative_vertices(&self) -> Vec<VertexId> {
        let mut vs: Vec<_> = self.topo.negative.iter().map(|&e| self.src(e)).collect();
        vs.dedup();
        vs
    }

    /// Number of `Negative`-class edges whose current weight is below zero.
    pub fn count_negative(&self) -> usize {
        self.topo.negative.iter().filter(|&&e| self.weights[e].is_negative()).count()
    }

    /// True when every `NonNegative` edge currently has weight >= 0.
    pub fn is_valid_weighting(&self) -> bool {
        self.first_invalid_edge().is_none()
    }

    pub(crate) fn first_invalid_edge(&self) -> Option<EdgeId> {
        (0..self.m()).find(|&e| self.class(e) == EdgeClass::NonNegative && self.weights[e].is_negative())
    }

    pub(crate) fn require_valid(&self, what: &str) -> Result<()> {
        match self.first_invalid_edge() {
            None => Ok(()),
            Some(e) => Err(contract(format!(
                "{what}: nonnegative-class edge {}->{} has weight {}",
                self.src(e),
                self.dst(e),
                self.weight(e)
            ))),
        }
    }

    pub(crate) fn check_vertex(&self, v: VertexId) -> Result<()> {
        if v < self.n() {
            Ok(())
        } else {
            Err(Error::VertexOutOfRange { vertex: v, n: self.n() })
        }
    }

    /// Applies `w(u,v) + phi(u) - phi(v)` to every edge. Topology and
    /// classes are shared with `self`.
    pub fn reweight(&self, phi: &PriceFunction<W>) -> Result<Self> {
        if phi.len() != self.n() {
            return Err(contract(format!(
                "price function has length {} but graph has {} vertices",
                phi.len(),
                self.n()
            )));
        }
        let weights = (0..self.m())
            .map(|e| self.weights[e] + phi[self.src(e)] - phi[self.dst(e)])
            .collect();
        Ok(Graph { topo: Arc::clone(&self.topo), weights })
    }

    /// Whether `phi` keeps every `NonNegative` edge nonnegative.
    pub fn is_valid_price(&self, phi: &PriceFunction<W>) -> bool {
        phi.len() == self.n()
            && (0..self.m()).all(|e| {
                self.class(e) == EdgeClass::Negative
                    || !(self.weights[e] + phi[self.src(e)] - phi[self.dst(e)]).is_negative()
            })
    }

    /// Reverses every edge, keeping weights and classes.
    pub fn transpose(&self) -> Self {
        let edges = self
            .edges()
            .map(|e| Edge { src: e.dst, dst: e.src, weight: e.weight, class: e.class })
            .collect();
        Self::from_edges(self.n(), edges).expect("transpose of a well-formed graph")
    }

    /// The subgraph `(V, E+ ∪ N)` where `N` is the set of `Negative` edges
    /// for which `keep` returns true.
    pub fn restrict_negative(&self, mut keep: impl FnMut(EdgeId) -> bool) -> Self {
        let edges = (0..self.m())
            .filter(|&e| self.class(e) == EdgeClass::NonNegative || keep(e))
            .map(|e| self.edge(e))
            .collect();
        Self::from_edges(self.n(), edges).expect("subgraph of a well-formed graph")
    }

    /// Keeps only the negative edges leaving `tails`.
    pub fn restrict_to_tails(&self, tails: &[VertexId]) -> Self {
        let mut mark = vec![false; self.n()];
        for &u in tails {
            mark[u] = true;
        }
        self.restrict_negative(|e| mark[self.src(e)])
    }

    /// A fresh graph whose classes follow the current weight signs.
    ///
    /// Used at the start of every elimination batch, whose input must have
    /// exactly the currently-negative edges in its negative class.
    pub fn reclassified(&self) -> Self {
        let edges = self.edges().map(|e| Edge::new(e.src, e.dst, e.weight)).collect();
        Self::from_edges(self.n(), edges).expect("reclassification of a well-formed graph")
    }

    pub fn max_degree(&self) -> usize {
        (0..self.n()).map(|v| self.degree(v)).max().unwrap_or(0)
    }
}

impl<W: Weight> PartialEq for Graph<W> {
    fn eq(&self, other: &Self) -> bool {
        self.n() == other.n() && self.m() == other.m() && self.edges().eq(other.edges())
    }
}

impl<W: Weight> fmt::Debug for Graph<W> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Graph")
            .field("n", &self.n())
            .field("edges", &self.edges().collect::<Vec<_>>())
            .finish()
    }
}

/// A vertex potential. Reweighting by `phi` maps `w(u,v)` to
/// `w(u,v) + phi(u) - phi(v)`; potentials compose by pointwise addition.
#[derive(Clone, Debug, PartialEq)]
pub struct PriceFunction<W> {
    phi: Vec<W>,
}

impl<W: Weight> PriceFunction<W> {
    pub fn zero(n: usize) -> Self {
        PriceFunction { phi: vec![W::ZERO; n] }
    }

    pub fn from_vec(phi: Vec<W>) -> Self {
        PriceFunction { phi }
    }

    pub fn len(&self) -> usize {
        self.phi.len()
    }

    pub fn is_empty(&self) -> bool {
        self.phi.is_empty()
    }

    pub fn as_slice(&self) -> &[W] {
        &self.phi
    }

    pub fn into_vec(self) -> Vec<W> {
        self.phi
    }

    pub fn is_zero(&self) -> bool {
        self.phi.iter().all(|&p| p == W::ZERO)
    }

    /// Pointwise sum, i.e. applying `self` and then `other`.
    pub fn compose(&self, other: &Self) -> Result<Self> {
        if self.len() != other.len() {
            return Err(contract("composing price functions of different lengths"));
        }
        Ok(PriceFunction { phi: self.phi.iter().zip(&other.phi).map(|(&a, &b)| a + b).collect() })
    }

    pub fn add_assign(&mut self, other: &Self) {
        assert_eq!(self.len(), other.len(), "price function length mismatch");
        for (a, &b) in self.phi.iter_mut().zip(&other.phi) {
            *a = *a + b;
        }
    }
}

impl<W> Index<VertexId> for PriceFunction<W> {
    type Output = W;

    #[inline]
    fn index(&self, v: VertexId) -> &W {
        &self.phi[v]
    }
}

impl<W: Weight> Add for &PriceFunction<W> {
    type Output = PriceFunction<W>;

    fn add(self, rhs: Self) -> PriceFunction<W> {
        self.compose(rhs).expect("price function length mismatch")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn g1() -> Graph<i64> {
        Graph::from_weighted_edges(3, [(0, 1, -2), (1, 2, 1)]).unwrap()
    }

    #[test]
    fn zero_price_leaves_weights_unchanged() {
        let g = g1();
        let h = g.reweight(&PriceFunction::zero(3)).unwrap();
        assert_eq!(g, h);
    }

    #[test]
    fn johnson_price_on_g1() {
        let g = g1();
        let phi = PriceFunction::from_vec(vec![0, -2, -1]);
        assert!(g.is_valid_price(&phi));
        let h = g.reweight(&phi).unwrap();
        assert_eq!(h.weights(), &[0, 0]);
        assert_eq!(g.count_negative(), 1);
        assert_eq!(h.count_negative(), 0);
    }

    #[test]
    fn invalid_price_detected() {
        let g = Graph::from_weighted_edges(2, [(0, 1, 5i64)]).unwrap();
        assert!(g.is_valid_price(&PriceFunction::zero(2)));
        assert!(!g.is_valid_price(&PriceFunction::from_vec(vec![0, 10])));
    }

    #[test]
    fn two_cycle_weight_is_invariant() {
        let g = Graph::from_weighted_edges(2, [(0, 1, -1i64), (1, 0, 1)]).unwrap();
        let h = g.reweight(&PriceFunction::from_vec(vec![17, -4])).unwrap();
        assert_eq!(h.weights().iter().sum::<i64>(), 0);
    }

    #[test]
    fn reweight_rejects_length_mismatch() {
        let err = g1().reweight(&PriceFunction::zero(2)).unwrap_err();
        assert!(matches!(err, Error::ContractViolation(_)));
    }

    #[test]
    fn transpose_of_g1() {
        let t = g1().transpose();
        let edges: Vec<_> = t.edges().collect();
        assert_eq!(
            edges,
            vec![
                Edge::with_class(1, 0, -2, EdgeClass::Negative),
                Edge::with_class(2, 1, 1, EdgeClass::NonNegative),
            ]
        );
        assert_eq!(t.transpose(), g1());
        assert_eq!(Graph::<i64>::empty(0).transpose(), Graph::empty(0));
    }

    #[test]
    fn classes_survive_reweighting() {
        let g = g1();
        let h = g.reweight(&PriceFunction::from_vec(vec![5, 0, 0])).unwrap();
        assert_eq!(h.weight(0), 3);
        assert_eq!(h.class(0), EdgeClass::Negative);
        assert_eq!(h.count_negative(), 0);
        assert_eq!(h.reclassified().class(0), EdgeClass::NonNegative);
    }

    #[test]
    fn rejects_bad_vertices_and_weights() {
        assert!(matches!(
            Graph::from_weighted_edges(2, [(0, 2, 1i64)]),
            Err(Error::VertexOutOfRange { vertex: 2, n: 2 })
        ));
        assert!(Graph::from_weighted_edges(2, [(0, 1, f64::NAN)]).is_err());
    }
}
