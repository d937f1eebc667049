//! Hop-limited shortest paths.
//!
//! A path is `h`-hop when it uses at most `h` edges of the `Negative`
//! class; nonnegative edges are free. The engine interleaves `h + 1`
//! Dijkstra passes over nonnegative edges with `h` single relaxation
//! rounds over negative edges. Each round reads only the previous round's
//! distances, so round `j` holds exactly `dist^j(S, v)`, not an upper bound.

use crate::error::{contract, Result};
use crate::graph::{EdgeClass, Graph, PriceFunction, VertexId};
use crate::heap::IndexedHeap;
use crate::weight::{Dist, Weight};
use crate::NegativeCycle;

const NO_SOURCE: usize = usize::MAX;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct BfdOptions {
    /// Keep every round `0..=h`; otherwise only the last round is stored.
    pub all_rounds: bool,
    /// Track the source achieving each final distance, lowest id on ties.
    pub witnesses: bool,
}

impl BfdOptions {
    pub const LAST: Self = BfdOptions { all_rounds: false, witnesses: false };
    pub const ALL: Self = BfdOptions { all_rounds: true, witnesses: false };
}

/// `d[j][v] = dist^j(S, v)` for `j <= h`, plus witnesses for round `h`.
#[derive(Clone, Debug, PartialEq)]
pub struct HopDistanceTable<W> {
    h: usize,
    sources: Vec<VertexId>,
    rounds: Vec<Vec<Dist<W>>>,
    all_rounds: bool,
    witness: Option<Vec<usize>>,
    last_decrease: usize,
}

impl<W: Weight> HopDistanceTable<W> {
    pub fn h(&self) -> usize {
        self.h
    }

    pub fn sources(&self) -> &[VertexId] {
        &self.sources
    }

    pub fn final_round(&self) -> &[Dist<W>] {
        self.rounds.last().expect("table has at least one round")
    }

    pub fn into_final_round(mut self) -> Vec<Dist<W>> {
        self.rounds.pop().expect("table has at least one round")
    }

    /// Round `j`, if it was materialized.
    pub fn round(&self, j: usize) -> Option<&[Dist<W>]> {
        if j > self.h {
            None
        } else if self.all_rounds {
            Some(&self.rounds[j])
        } else if j == self.h {
            Some(self.final_round())
        } else {
            None
        }
    }

    pub fn has_all_rounds(&self) -> bool {
        self.all_rounds
    }

    /// The source `s(v)` with `d[h][v] = dist^h(s(v), v)`.
    pub fn witness(&self, v: VertexId) -> Option<VertexId> {
        self.witness.as_ref().and_then(|w| (w[v] != NO_SOURCE).then_some(w[v]))
    }

    /// Whether some distance strictly dropped in round `h`, i.e.
    /// `d[h] != d[h-1]`. Always false for `h = 0`.
    pub fn decreased_in_last_round(&self) -> bool {
        self.h > 0 && self.last_decrease == self.h
    }

    /// Vertices with `d[h][v] < 0`.
    pub fn negative_reach(&self) -> Vec<VertexId> {
        self.final_round().iter().enumerate().filter(|(_, d)| d.is_negative()).map(|(v, _)| v).collect()
    }
}

/// Reusable BFD workspace bound to one graph with a valid weighting.
pub struct Bfd<'g, W> {
    g: &'g Graph<W>,
    /// Nonnegative-class out-edges as `(dst, weight)`, CSR by tail.
    plus_off: Vec<u32>,
    plus: Vec<(u32, W)>,
    dist: Vec<Dist<W>>,
    src: Vec<usize>,
    heap: IndexedHeap<W>,
    pending: Vec<(VertexId, W, usize)>,
    changed: Vec<VertexId>,
    mark: Vec<bool>,
}

impl<'g, W: Weight> Bfd<'g, W> {
    /// Fails if some nonnegative-class edge carries a negative weight.
    pub fn new(g: &'g Graph<W>) -> Result<Self> {
        g.require_valid("hop-limited search")?;
        Ok(Self::new_unchecked(g))
    }

    pub(crate) fn new_unchecked(g: &'g Graph<W>) -> Self {
        let n = g.n();
        assert!(g.m() < u32::MAX as usize, "edge count exceeds the u32 index space");
        let mut plus_off = Vec::with_capacity(n + 1);
        let mut plus = Vec::with_capacity(g.m() - g.negative_edge_ids().len());
        plus_off.push(0);
        for v in 0..n {
            for e in g.out_edge_ids(v) {
                if g.class(e) == EdgeClass::NonNegative {
                    plus.push((g.dst(e) as u32, g.weight(e)));
                }
            }
            plus_off.push(plus.len() as u32);
        }
        Bfd {
            g,
            plus_off,
            plus,
            dist: vec![Dist::Inf; n],
            src: vec![NO_SOURCE; n],
            heap: IndexedHeap::new(n),
            pending: Vec::new(),
            changed: Vec::new(),
            mark: vec![false; n],
        }
    }

    pub fn graph(&self) -> &'g Graph<W> {
        self.g
    }

    pub fn run(&mut self, sources: &[VertexId], h: usize, opts: BfdOptions) -> Result<HopDistanceTable<W>> {
        let mut sources = sources.to_vec();
        sources.sort_unstable();
        sources.dedup();
        if sources.is_empty() {
            return Err(contract("hop-limited search needs at least one source"));
        }
        for &s in &sources {
            self.g.check_vertex(s)?;
        }
        Ok(self.run_sorted(sources, h, opts))
    }

    fn run_sorted(&mut self, sources: Vec<VertexId>, h: usize, opts: BfdOptions) -> HopDistanceTable<W> {
        let witnesses = opts.witnesses;
        self.dist.fill(Dist::Inf);
        self.src.fill(NO_SOURCE);
        self.changed.clear();
        for &s in &sources {
            self.dist[s] = Dist::ZERO;
            self.src[s] = s;
            self.changed.push(s);
        }
        self.dijkstra_pass(witnesses);

        let mut rounds = Vec::with_capacity(if opts.all_rounds { h + 1 } else { 1 });
        if opts.all_rounds {
            rounds.push(self.dist.clone());
        }
        let mut last_decrease = 0;
        for j in 1..=h {
            let decreased = self.negative_round(witnesses);
            if decreased {
                last_decrease = j;
            }
            if self.changed.is_empty() {
                // Fixpoint: rounds j..=h all equal the current one.
                if opts.all_rounds {
                    for _ in j..=h {
                        rounds.push(self.dist.clone());
                    }
                }
                break;
            }
            self.dijkstra_pass(witnesses);
            if opts.all_rounds {
                rounds.push(self.dist.clone());
            }
        }
        if !opts.all_rounds {
            rounds.push(self.dist.clone());
        }
        HopDistanceTable {
            h,
            sources,
            rounds,
            all_rounds: opts.all_rounds,
            witness: witnesses.then(|| self.src.clone()),
            last_decrease,
        }
    }

    #[inline]
    fn improves(&self, v: VertexId, nd: W, s: usize, witnesses: bool) -> bool {
        match self.dist[v] {
            Dist::Inf => true,
            Dist::Finite(cur) => nd < cur || (witnesses && nd == cur && s < self.src[v]),
        }
    }

    /// One Bellman-Ford round over negative-class edges, reading only the
    /// previous round. Leaves the improved vertices in `self.changed`.
    fn negative_round(&mut self, witnesses: bool) -> bool {
        let g = self.g;
        self.pending.clear();
        for &e in g.negative_edge_ids() {
            let u = g.src(e);
            if let Dist::Finite(du) = self.dist[u] {
                self.pending.push((g.dst(e), du + g.weight(e), self.src[u]));
            }
        }
        self.changed.clear();
        let mut decreased = false;
        for i in 0..self.pending.len() {
            let (v, nd, s) = self.pending[i];
            if self.improves(v, nd, s, witnesses) {
                decreased |= match self.dist[v] {
                    Dist::Inf => true,
                    Dist::Finite(cur) => nd < cur,
                };
                self.dist[v] = Dist::Finite(nd);
                self.src[v] = s;
                if !self.mark[v] {
                    self.mark[v] = true;
                    self.changed.push(v);
                }
            }
        }
        for &v in &self.changed {
            self.mark[v] = false;
        }
        decreased
    }

    /// Dijkstra over nonnegative-class edges without reinitializing
    /// distances. Seeding only the vertices changed since the last pass is
    /// exact: every other vertex already satisfies its out-edge relaxations.
    fn dijkstra_pass(&mut self, witnesses: bool) {
        for &v in &self.changed {
            if let Dist::Finite(d) = self.dist[v] {
                self.heap.push_or_decrease(v, d, self.src[v]);
            }
        }
        while let Some((d, s, v)) = self.heap.pop() {
            let (lo, hi) = (self.plus_off[v] as usize, self.plus_off[v + 1] as usize);
            for i in lo..hi {
                let (x, w) = self.plus[i];
                let (x, nd) = (x as usize, d + w);
                if self.improves(x, nd, s, witnesses) {
                    self.dist[x] = Dist::Finite(nd);
                    self.src[x] = s;
                    self.heap.push_or_decrease(x, nd, s);
                }
            }
        }
    }
}

/// `h`-hop distances from the source set, every round kept.
pub fn bfd<W: Weight>(g: &Graph<W>, sources: &[VertexId], h: usize) -> Result<HopDistanceTable<W>> {
    Bfd::new(g)?.run(sources, h, BfdOptions { all_rounds: true, witnesses: true })
}

/// `h`-hop distances *to* the target set: `d[j][v] = dist^j(v, T)`.
pub fn bfd_stsp<W: Weight>(g: &Graph<W>, targets: &[VertexId], h: usize) -> Result<HopDistanceTable<W>> {
    let t = g.transpose();
    bfd(&t, targets, h)
}

/// The negative `h`-hop reach `{v : dist^h(S, v) < 0}`, ascending.
pub fn reach<W: Weight>(g: &Graph<W>, sources: &[VertexId], h: usize) -> Result<Vec<VertexId>> {
    if sources.is_empty() {
        g.require_valid("reach")?;
        return Ok(Vec::new());
    }
    Ok(Bfd::new(g)?.run(sources, h, BfdOptions::LAST)?.negative_reach())
}

/// Plain SSSP by BFD with `h` equal to the number of negative-class edges.
/// A further round that still lowers a distance means a negative cycle is
/// reachable from `source`.
pub fn full_sssp_bfd<W: Weight>(
    g: &Graph<W>,
    source: VertexId,
) -> Result<std::result::Result<Vec<Dist<W>>, NegativeCycle>> {
    let k = g.negative_edge_ids().len();
    let table = Bfd::new(g)?.run(&[source], k + 1, BfdOptions::LAST)?;
    if table.decreased_in_last_round() {
        Ok(Err(NegativeCycle))
    } else {
        Ok(Ok(table.into_final_round()))
    }
}

/// Johnson's price function `phi(v) = dist(V, v)` computed by super-source
/// BFD. Detects a negative cycle anywhere in the graph.
pub fn johnson_bfd<W: Weight>(g: &Graph<W>) -> Result<std::result::Result<PriceFunction<W>, NegativeCycle>> {
    if g.n() == 0 {
        return Ok(Ok(PriceFunction::zero(0)));
    }
    let all: Vec<_> = (0..g.n()).collect();
    let k = g.negative_edge_ids().len();
    let table = Bfd::new(g)?.run(&all, k + 1, BfdOptions::LAST)?;
    if table.decreased_in_last_round() {
        return Ok(Err(NegativeCycle));
    }
    let phi = table
        .final_round()
        .iter()
        .map(|d| d.finite().expect("every vertex is its own source"))
        .collect();
    Ok(Ok(PriceFunction::from_vec(phi)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::error::Error;

    const INF: Dist<i64> = Dist::Inf;

    fn f(x: i64) -> Dist<i64> {
        Dist::Finite(x)
    }

    fn g1() -> Graph<i64> {
        Graph::from_weighted_edges(3, [(0, 1, -2), (1, 2, 1)]).unwrap()
    }

    #[test]
    fn g1_rounds() {
        let t = bfd(&g1(), &[0], 1).unwrap();
        assert_eq!(t.round(0).unwrap(), &[f(0), INF, INF]);
        assert_eq!(t.round(1).unwrap(), &[f(0), f(-2), f(-1)]);
        assert_eq!(t.witness(2), Some(0));
    }

    #[test]
    fn g1_stsp() {
        let t = bfd_stsp(&g1(), &[2], 1).unwrap();
        assert_eq!(t.final_round(), &[f(-1), f(1), f(0)]);
    }

    #[test]
    fn g1_reach() {
        assert_eq!(reach(&g1(), &[0], 1).unwrap(), vec![1, 2]);
        assert!(reach(&g1(), &[0], 0).unwrap().is_empty());
        assert!(reach(&g1(), &[], 3).unwrap().is_empty());
    }

    #[test]
    fn zero_hops_is_dijkstra() {
        let g = Graph::from_weighted_edges(4, [(0, 1, 4i64), (0, 2, 1), (2, 1, 2), (1, 3, 5)]).unwrap();
        let t = bfd(&g, &[0], 0).unwrap();
        assert_eq!(t.final_round(), &[f(0), f(3), f(1), f(8)]);
    }

    #[test]
    fn all_sources_nonnegative_graph_is_zero() {
        let g = Graph::from_weighted_edges(4, [(0, 1, 4i64), (2, 1, 2), (1, 3, 5)]).unwrap();
        let t = bfd(&g, &[0, 1, 2, 3], 3).unwrap();
        for j in 0..=3 {
            assert!(t.round(j).unwrap().iter().all(|&d| d == f(0)));
        }
    }

    #[test]
    fn full_sssp_on_g1_and_two_cycle() {
        assert_eq!(full_sssp_bfd(&g1(), 0).unwrap(), Ok(vec![f(0), f(-2), f(-1)]));
        let cyc = Graph::from_weighted_edges(2, [(0, 1, -2i64), (1, 0, 1)]).unwrap();
        assert_eq!(full_sssp_bfd(&cyc, 0).unwrap(), Err(NegativeCycle));
        assert_eq!(johnson_bfd(&cyc).unwrap(), Err(NegativeCycle));
    }

    #[test]
    fn hop_distances_stay_finite_with_negative_cycles() {
        let cyc = Graph::from_weighted_edges(2, [(0, 1, -2i64), (1, 0, 1)]).unwrap();
        let t = bfd(&cyc, &[0], 4).unwrap();
        // Four trips around the cycle, each worth -1.
        assert_eq!(t.round(4).unwrap(), &[f(-4), f(-5)]);
    }

    #[test]
    fn invalid_weighting_is_rejected() {
        let g = g1().reweight(&PriceFunction::from_vec(vec![0, 0, 5])).unwrap();
        assert!(matches!(bfd(&g, &[0], 1), Err(Error::ContractViolation(_))));
    }

    #[test]
    fn witness_prefers_lowest_source_on_ties() {
        // Both 0 and 1 reach 2 at distance 3.
        let g = Graph::from_weighted_edges(3, [(1, 2, 3i64), (0, 2, 3)]).unwrap();
        let t = bfd(&g, &[1, 0], 0).unwrap();
        assert_eq!(t.witness(2), Some(0));
    }

    #[test]
    fn rolling_table_matches_full_table() {
        let g = Graph::from_weighted_edges(
            5,
            [(0, 1, -3i64), (1, 2, 2), (2, 3, -1), (3, 4, 0), (4, 1, 7), (0, 4, 9)],
        )
        .unwrap();
        let full = bfd(&g, &[0], 4).unwrap();
        let last = Bfd::new(&g).unwrap().run(&[0], 4, BfdOptions::LAST).unwrap();
        assert_eq!(full.final_round(), last.final_round());
        assert_eq!(last.round(2), None);
    }
}
