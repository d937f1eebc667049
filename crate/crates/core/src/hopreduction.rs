//! Elimination of a remote negative edge set by hop reduction.
//!
//! Given negative edges `N` whose tails have a small negative `r`-hop reach,
//! builds a layered graph `H` in which every `h`-hop path of
//! `G^N = (V, E+ ∪ N)` has a counterpart with at most `ceil(h / r)` hops,
//! then reads Johnson's price function for `G^N` off a short BFD in `H`.

use crate::error::{contract, Result};
use crate::graph::{Edge, EdgeClass, EdgeId, Graph, PriceFunction, VertexId};
use crate::hoplimited::{Bfd, BfdOptions, HopDistanceTable};
use crate::weight::Weight;
use crate::NegativeCycle;

/// The layered graph `H`.
///
/// Vertices `0..n` are layer 0. A vertex `v` of the remote set `R` also has
/// copies `v_1..v_r`; copy `v_j` has id `n + (j - 1)|R| + rank(v)`. The
/// negative class of `H` consists of exactly the edges `(u_r, u_0)`.
#[derive(Clone)]
pub struct LayeredGraph<W> {
    pub graph: Graph<W>,
    pub r: usize,
    /// `R = {v : delta_r(v) < 0}`, ascending.
    pub remote: Vec<VertexId>,
    /// Non-`(u_r, u_0)` edges that came out negative. Always zero unless the
    /// distance table is inconsistent with the graph.
    pub sign_violations: usize,
}

impl<W: Weight> LayeredGraph<W> {
    /// Builds `H` from `G^N` and its super-source distances
    /// `delta[j][v] = dist^j(V, v)` for `j <= r`.
    pub fn build(gn: &Graph<W>, delta: &HopDistanceTable<W>, r: usize) -> Result<Self> {
        if !delta.has_all_rounds() || delta.h() != r {
            return Err(contract("layered graph needs every round 0..=r of the distance table"));
        }
        let n = gn.n();
        let delta: Vec<Vec<W>> = (0..=r)
            .map(|j| {
                delta.round(j).unwrap().iter().map(|d| d.finite().expect("super-source distance is finite")).collect()
            })
            .collect();
        let remote: Vec<VertexId> = (0..n).filter(|&v| delta[r][v].is_negative()).collect();
        let mut rank = vec![usize::MAX; n];
        for (i, &v) in remote.iter().enumerate() {
            rank[v] = i;
        }
        let in_r = |v: VertexId| rank[v] != usize::MAX;
        let id = |v: VertexId, j: usize| if j == 0 { v } else { n + (j - 1) * remote.len() + rank[v] };

        let mut edges = Vec::with_capacity(gn.m() + r * remote.len() * 4);
        let mut sign_violations = 0;
        let mut push = |edges: &mut Vec<Edge<W>>, (u, i): (VertexId, usize), (v, j): (VertexId, usize), w: W| {
            // Same summation order as the BFD relaxation, so the difference
            // is exactly nonnegative in floating point as well.
            let wh = (delta[i][u] + w) - delta[j][v];
            if wh.is_negative() {
                sign_violations += 1;
            }
            edges.push(Edge::with_class(id(u, i), id(v, j), wh, EdgeClass::NonNegative));
        };
        for e in 0..gn.m() {
            let (u, v, w) = (gn.src(e), gn.dst(e), gn.weight(e));
            let (layers, rise) = match gn.class(e) {
                EdgeClass::NonNegative => (if in_r(u) { r + 1 } else { 1 }, 0),
                EdgeClass::Negative => (if in_r(u) { r } else { 1 }, 1),
            };
            for i in 0..layers {
                let j = if in_r(v) { i + rise } else { 0 };
                push(&mut edges, (u, i), (v, j), w);
            }
        }
        for &u in &remote {
            for j in 0..r {
                push(&mut edges, (u, j), (u, j + 1), W::ZERO);
            }
            let wh = delta[r][u] - delta[0][u];
            edges.push(Edge::with_class(id(u, r), u, wh, EdgeClass::Negative));
        }
        let graph = Graph::from_edges(n + r * remote.len(), edges)?;
        Ok(LayeredGraph { graph, r, remote, sign_violations })
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, serde::Serialize)]
pub struct HopReductionStats {
    pub n: usize,
    pub remote: usize,
    pub layered_vertices: usize,
    pub layered_edges: usize,
    pub sign_violations: usize,
    pub kappa: usize,
}

/// Returns a valid price function for `g` that makes every edge of `n_set`
/// nonnegative, or reports a negative cycle in `G^N`.
///
/// Edges of `n_set` that are already nonnegative are treated as ordinary
/// nonnegative edges, so `k_hat` counts only the negative ones.
pub fn eliminate_remote<W: Weight>(
    g: &Graph<W>,
    n_set: &[EdgeId],
    r: usize,
) -> Result<(std::result::Result<PriceFunction<W>, NegativeCycle>, HopReductionStats)> {
    g.require_valid("hop reduction")?;
    if r == 0 {
        return Err(contract("hop reduction needs r >= 1"));
    }
    let n = g.n();
    let mut in_n = vec![false; g.m()];
    for &e in n_set {
        if e >= g.m() {
            return Err(contract(format!("edge id {e} out of range")));
        }
        in_n[e] = true;
    }
    let edges = g
        .edges()
        .enumerate()
        .filter(|&(e, ref edge)| edge.class == EdgeClass::NonNegative || in_n[e])
        .map(|(_, edge)| Edge::new(edge.src, edge.dst, edge.weight))
        .collect();
    let gn = Graph::from_edges(n, edges)?;
    let k_hat = gn.negative_edge_ids().len();
    let mut stats = HopReductionStats { n, ..Default::default() };
    if k_hat == 0 || n == 0 {
        return Ok((Ok(PriceFunction::zero(n)), stats));
    }

    let all: Vec<VertexId> = (0..n).collect();
    let delta = Bfd::new_unchecked(&gn).run(&all, r, BfdOptions::ALL)?;
    let h = LayeredGraph::build(&gn, &delta, r)?;
    stats.remote = h.remote.len();
    stats.layered_vertices = h.graph.n();
    stats.layered_edges = h.graph.m();
    stats.sign_violations = h.sign_violations;
    if h.sign_violations > 0 {
        return Err(contract(format!("{} edges of the layered graph are negative", h.sign_violations)));
    }

    let kappa = k_hat.div_ceil(r);
    stats.kappa = kappa;
    let table = Bfd::new(&h.graph)?.run(&all, kappa + 1, BfdOptions::LAST)?;
    if table.decreased_in_last_round() {
        return Ok((Err(NegativeCycle), stats));
    }
    let phi = table.final_round()[..n].iter().map(|d| d.finite().expect("layer-0 vertices are sources")).collect();
    Ok((Ok(PriceFunction::from_vec(phi)), stats))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct RemoteCheck {
    /// `|reach^r(U)|` in `G^{out(U)}`.
    pub reach: usize,
    /// Whether `reach <= n / r`.
    pub remote: bool,
}

/// Measures the negative `r`-hop reach of `u` in `G^{out(U)}`, the graph
/// keeping only the negative edges that leave `u`.
pub fn check_remote<W: Weight>(g: &Graph<W>, u: &[VertexId], r: usize) -> Result<RemoteCheck> {
    g.require_valid("remoteness check")?;
    if u.is_empty() {
        return Ok(RemoteCheck { reach: 0, remote: true });
    }
    let sub = g.restrict_to_tails(u);
    let reach = Bfd::new_unchecked(&sub).run(u, r, BfdOptions::LAST)?.negative_reach().len();
    Ok(RemoteCheck { reach, remote: reach * r <= g.n() })
}
