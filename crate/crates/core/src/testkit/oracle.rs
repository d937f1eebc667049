use crate::error::{contract, Error, Result};
use crate::graph::{EdgeClass, EdgeId, Graph, VertexId};
use crate::weight::{Dist, Weight};

pub const ORACLE_HOP_DP_LIMIT: usize = 400;

#[derive(Clone, Debug, PartialEq)]
pub enum OracleResult<W> {
    Distances(Vec<Dist<W>>),
    /// `witness` is a closed walk `[v0, v1, ..., v0]` of negative weight.
    NegativeCycle { witness: Vec<VertexId> },
}

impl<W: Weight> OracleResult<W> {
    pub fn is_cycle(&self) -> bool {
        matches!(self, OracleResult::NegativeCycle { .. })
    }

    pub fn distances(&self) -> Option<&[Dist<W>]> {
        match self {
            OracleResult::Distances(d) => Some(d),
            OracleResult::NegativeCycle { .. } => None,
        }
    }
}

/// Weight of the closed or open walk `vs`, taking the lightest parallel
/// edge between consecutive vertices. `None` if some step has no edge.
pub fn walk_weight<W: Weight>(g: &Graph<W>, vs: &[VertexId]) -> Option<W> {
    let mut total = W::ZERO;
    for pair in vs.windows(2) {
        let w = g
            .out_edge_ids(pair[0])
            .filter(|&e| g.dst(e) == pair[1])
            .map(|e| g.weight(e))
            .min_by(|a, b| a.total_cmp_w(b))?;
        total = total + w;
    }
    Some(total)
}

/// Textbook Bellman-Ford from a set of sources, ignoring edge classes.
///
/// Reports a negative cycle only if one is reachable from `sources`; pass
/// every vertex to detect cycles anywhere.
pub fn oracle_bellman_ford<W: Weight>(g: &Graph<W>, sources: &[VertexId]) -> Result<OracleResult<W>> {
    let n = g.n();
    for &s in sources {
        g.check_vertex(s)?;
    }
    let mut d = vec![Dist::<W>::Inf; n];
    let mut pred: Vec<Option<EdgeId>> = vec![None; n];
    for &s in sources {
        d[s] = Dist::ZERO;
    }
    let mut round = 0;
    loop {
        round += 1;
        let mut last_changed = None;
        for e in 0..g.m() {
            let (u, v) = (g.src(e), g.dst(e));
            let cand = d[u].plus(g.weight(e));
            if cand < d[v] {
                d[v] = cand;
                pred[v] = Some(e);
                last_changed = Some(v);
            }
        }
        let Some(v) = last_changed else {
            return Ok(OracleResult::Distances(d));
        };
        if round >= n {
            if let Some(witness) = predecessor_cycle(g, &pred, v) {
                return Ok(OracleResult::NegativeCycle { witness });
            }
        }
    }
}

/// Walks predecessor edges back from `v`; once a vertex repeats, returns
/// the cycle in forward order, closed. Only cycles of negative weight are
/// accepted.
fn predecessor_cycle<W: Weight>(g: &Graph<W>, pred: &[Option<EdgeId>], v: VertexId) -> Option<Vec<VertexId>> {
    let n = g.n();
    let mut seen = vec![usize::MAX; n];
    let mut cur = v;
    let mut step = 0;
    while seen[cur] == usize::MAX {
        seen[cur] = step;
        step += 1;
        cur = g.src(pred[cur]?);
    }
    let start = cur;
    let mut back = vec![start];
    let mut total = W::ZERO;
    loop {
        let e = pred[cur].expect("vertex on a predecessor cycle has a predecessor");
        total = total + g.weight(e);
        cur = g.src(e);
        back.push(cur);
        if cur == start {
            break;
        }
    }
    back.reverse();
    total.is_negative().then_some(back)
}

/// SSSP verdict with global cycle detection: a negative cycle anywhere in
/// `g` is reported, otherwise exact distances from `source`.
pub fn oracle_sssp<W: Weight>(g: &Graph<W>, source: VertexId) -> Result<OracleResult<W>> {
    g.check_vertex(source)?;
    let all: Vec<_> = (0..g.n()).collect();
    let global = oracle_bellman_ford(g, &all)?;
    if global.is_cycle() {
        return Ok(global);
    }
    oracle_bellman_ford(g, &[source])
}

/// `table[j][v] = dist^j(S, v)` for `j <= h`, by a round dynamic program:
/// `d_0` relaxes nonnegative-class edges to a fixpoint, and `d_{j+1}`
/// applies one relaxation over negative-class edges to `d_j` followed by
/// another nonnegative fixpoint.
pub fn oracle_hop_dp<W: Weight>(g: &Graph<W>, sources: &[VertexId], h: usize) -> Result<Vec<Vec<Dist<W>>>> {
    let n = g.n();
    if n > ORACLE_HOP_DP_LIMIT {
        return Err(Error::SizeGuard { n, limit: ORACLE_HOP_DP_LIMIT });
    }
    if !g.is_valid_weighting() {
        return Err(contract("hop DP oracle needs a valid weighting"));
    }
    for &s in sources {
        g.check_vertex(s)?;
    }
    let mut cur = vec![Dist::<W>::Inf; n];
    for &s in sources {
        cur[s] = Dist::ZERO;
    }
    nonnegative_fixpoint(g, &mut cur);
    let mut table = vec![cur];
    for _ in 0..h {
        let prev = table.last().unwrap();
        let mut next = prev.clone();
        for e in 0..g.m() {
            if g.class(e) == EdgeClass::Negative {
                let cand = prev[g.src(e)].plus(g.weight(e));
                if cand < next[g.dst(e)] {
                    next[g.dst(e)] = cand;
                }
            }
        }
        nonnegative_fixpoint(g, &mut next);
        table.push(next);
    }
    Ok(table)
}

fn nonnegative_fixpoint<W: Weight>(g: &Graph<W>, d: &mut [Dist<W>]) {
    let mut changed = true;
    while changed {
        changed = false;
        for e in 0..g.m() {
            if g.class(e) == EdgeClass::NonNegative {
                let cand = d[g.src(e)].plus(g.weight(e));
                if cand < d[g.dst(e)] {
                    d[g.dst(e)] = cand;
                    changed = true;
                }
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f(x: i64) -> Dist<i64> {
        Dist::Finite(x)
    }

    fn g1() -> Graph<i64> {
        Graph::from_weighted_edges(3, [(0, 1, -2), (1, 2, 1)]).unwrap()
    }

    #[test]
    fn bellman_ford_on_g1() {
        assert_eq!(oracle_bellman_ford(&g1(), &[0]).unwrap(), OracleResult::Distances(vec![f(0), f(-2), f(-1)]));
    }

    #[test]
    fn two_cycle_witness() {
        let g = Graph::from_weighted_edges(2, [(0, 1, -2i64), (1, 0, 1)]).unwrap();
        let OracleResult::NegativeCycle { witness } = oracle_bellman_ford(&g, &[0]).unwrap() else {
            panic!("expected a cycle");
        };
        assert_eq!(witness.first(), witness.last());
        assert_eq!(witness.len(), 3);
        assert_eq!(walk_weight(&g, &witness), Some(-1));
    }

    #[test]
    fn unreachable_cycle_only_seen_globally() {
        let g = Graph::from_weighted_edges(3, [(1, 2, -2i64), (2, 1, 1)]).unwrap();
        assert_eq!(oracle_bellman_ford(&g, &[0]).unwrap(), OracleResult::Distances(vec![f(0), Dist::Inf, Dist::Inf]));
        assert!(oracle_sssp(&g, 0).unwrap().is_cycle());
    }

    #[test]
    fn hop_dp_on_g1() {
        let t = oracle_hop_dp(&g1(), &[0], 1).unwrap();
        assert_eq!(t[0], vec![f(0), Dist::Inf, Dist::Inf]);
        assert_eq!(t[1], vec![f(0), f(-2), f(-1)]);
    }

    #[test]
    fn hop_dp_guard() {
        let g = Graph::<i64>::empty(ORACLE_HOP_DP_LIMIT + 1);
        assert!(matches!(oracle_hop_dp(&g, &[0], 1), Err(Error::SizeGuard { .. })));
    }
}
