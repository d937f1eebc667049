//! The elimination loop: batches of negative-edge elimination until none
//! remain, then Dijkstra.

use std::collections::BinaryHeap;
use std::cmp::Reverse;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::betweenness::{betweenness_reduce, sample_is_nonnegative, BetweennessParams};
use crate::error::{contract, Error, Result};
use crate::graph::{normalize, EdgeId, Graph, PriceFunction, VertexId};
use crate::hoplimited::{johnson_bfd, Bfd, BfdOptions};
use crate::hopreduction::{check_remote, eliminate_remote, HopReductionStats};
use crate::sandwich::{ceil_cbrt, ceil_lg, find_sandwich_or_is, is_independent, sandwich_price, CrustParams, SandwichOrIs};
use crate::testkit::{oracle_hop_dp, ORACLE_HOP_DP_LIMIT};
use crate::weight::{Dist, Weight};
use crate::NegativeCycle;

#[derive(Clone, Debug, PartialEq)]
pub enum SsspResult<W> {
    Distances(Vec<Dist<W>>),
    NegativeCycle,
}

impl<W: Weight> SsspResult<W> {
    pub fn is_cycle(&self) -> bool {
        matches!(self, SsspResult::NegativeCycle)
    }

    pub fn distances(&self) -> Option<&[Dist<W>]> {
        match self {
            SsspResult::Distances(d) => Some(d),
            SsspResult::NegativeCycle => None,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SolverConfig {
    pub seed: u64,
    /// Batches stop once at most this many negative edges remain; the rest
    /// are removed by one full-length BFD.
    pub k0: usize,
    pub betweenness_c: usize,
    pub crust: CrustParams,
    /// Record validity and structure checks of every intermediate result.
    /// Costly; meant for tests.
    pub audit: bool,
}

impl Default for SolverConfig {
    fn default() -> Self {
        SolverConfig {
            seed: 0,
            k0: 32,
            betweenness_c: BetweennessParams::DEFAULT_C,
            crust: CrustParams::default(),
            audit: false,
        }
    }
}

impl SolverConfig {
    pub fn with_seed(seed: u64) -> Self {
        SolverConfig { seed, ..Self::default() }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Branch {
    Sandwich,
    IndependentSet,
    /// The betweenness reduction alone removed every negative edge.
    Betweenness,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize)]
pub struct StageTimes {
    pub betweenness_ms: f64,
    pub search_ms: f64,
    pub sandwich_price_ms: f64,
    pub remote_check_ms: f64,
    pub hop_reduction_ms: f64,
    pub independent_ms: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BatchRecord {
    pub k_before: usize,
    pub k_after: usize,
    pub r: usize,
    pub branch: Branch,
    /// `k_before - k_after`.
    pub eliminated: usize,
    /// Size of the set the branch is guaranteed to eliminate: `|U|` after
    /// trimming, or `|I|`.
    pub target: usize,
    /// Failed remoteness gates plus crust-search restarts.
    pub restarts: usize,
    pub times: StageTimes,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Finish {
    /// No negative edges were left.
    Dijkstra,
    /// At most `k0` negative edges were left and a full BFD removed them.
    Cutoff,
    /// A batch ran out of restarts and a full BFD finished the job.
    Fallback,
    Cycle,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SolverStats {
    pub n: usize,
    pub m: usize,
    pub k: usize,
    pub normalized_n: usize,
    pub normalized_m: usize,
    pub batches: Vec<BatchRecord>,
    pub finish: Finish,
    pub normalize_ms: f64,
    pub batches_ms: f64,
    pub finish_ms: f64,
    pub total_ms: f64,
    pub layered: Vec<HopReductionStats>,
    #[serde(skip)]
    pub audit: Option<Audit>,
}

/// Checks recorded when [`SolverConfig::audit`] is set.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct Audit {
    /// `(stage, valid)` for every intermediate price function, checked on
    /// the graph it was computed for, and for the accumulated price on the
    /// normalized input.
    pub prices: Vec<(&'static str, bool)>,
    /// Sample nonnegativity after each betweenness reduction.
    pub samples: Vec<bool>,
    pub remote: Vec<RemoteAudit>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct RemoteAudit {
    pub n: usize,
    pub r: usize,
    /// Reach size seen by the gate.
    pub gate_reach: usize,
    pub passed: bool,
    /// Reach size recomputed independently for gates that passed.
    pub recomputed: Option<usize>,
}

fn ms(t: Instant) -> f64 {
    t.elapsed().as_secs_f64() * 1e3
}

/// Smallest integer `r >= 1` with `r^9 >= k`.
pub fn ceil_root9(k: usize) -> usize {
    let mut r = 1usize;
    while (r as u128).pow(9) < k as u128 {
        r += 1;
    }
    r
}

/// Dijkstra on a graph whose weights are all nonnegative, regardless of
/// class.
pub fn dijkstra<W: Weight>(g: &Graph<W>, source: VertexId) -> Result<Vec<Dist<W>>> {
    g.check_vertex(source)?;
    if let Some(e) = (0..g.m()).find(|&e| g.weight(e).is_negative()) {
        return Err(contract(format!("Dijkstra met negative edge {}->{}", g.src(e), g.dst(e))));
    }
    let mut dist = vec![Dist::Inf; g.n()];
    let mut done = vec![false; g.n()];
    dist[source] = Dist::ZERO;
    let mut heap = BinaryHeap::new();
    heap.push(Reverse(HeapItem(W::ZERO, source)));
    while let Some(Reverse(HeapItem(d, u))) = heap.pop() {
        if done[u] {
            continue;
        }
        done[u] = true;
        for e in g.out_edge_ids(u) {
            let v = g.dst(e);
            let nd = d + g.weight(e);
            if Dist::Finite(nd) < dist[v] {
                dist[v] = Dist::Finite(nd);
                heap.push(Reverse(HeapItem(nd, v)));
            }
        }
    }
    Ok(dist)
}

#[derive(Clone, Copy)]
struct HeapItem<W>(W, VertexId);

impl<W: Weight> PartialEq for HeapItem<W> {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == std::cmp::Ordering::Equal
    }
}

impl<W: Weight> Eq for HeapItem<W> {}

impl<W: Weight> PartialOrd for HeapItem<W> {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl<W: Weight> Ord for HeapItem<W> {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.0.total_cmp_w(&other.0).then(self.1.cmp(&other.1))
    }
}

/// `phi(v) = dist^1(V, v)` in `G^{out(I)}`, which makes every edge leaving
/// the 1-hop independent set `set` nonnegative.
pub fn eliminate_independent<W: Weight>(g: &Graph<W>, set: &[VertexId]) -> Result<PriceFunction<W>> {
    g.require_valid("independent-set elimination")?;
    if cfg!(debug_assertions) && !is_independent(g, set)? {
        return Err(contract("vertex set is not 1-hop independent"));
    }
    if set.is_empty() || g.n() == 0 {
        return Ok(PriceFunction::zero(g.n()));
    }
    let sub = g.restrict_to_tails(set);
    let all: Vec<VertexId> = (0..g.n()).collect();
    let d = Bfd::new_unchecked(&sub).run(&all, 1, BfdOptions::LAST)?;
    Ok(PriceFunction::from_vec(d.final_round().iter().map(|d| d.finite().expect("every vertex is a source")).collect()))
}

#[derive(Clone, Debug, PartialEq)]
pub enum BatchOutcome<W> {
    /// A valid price function for the batch input; `record.eliminated` is
    /// filled in by the caller.
    Eliminated { phi: PriceFunction<W>, record: BatchRecord, layered: Option<HopReductionStats> },
    NegativeCycle,
}

/// One elimination batch on a graph whose classes follow its weight signs.
///
/// Fails with [`Error::RestartBudgetExhausted`] when the remoteness gate
/// or the crust search keeps failing.
pub fn eliminate_batch<W: Weight, R: Rng + ?Sized>(
    g: &Graph<W>,
    cfg: &SolverConfig,
    rng: &mut R,
    mut audit: Option<&mut Audit>,
) -> Result<BatchOutcome<W>> {
    g.require_valid("elimination batch")?;
    let k = g.count_negative();
    if k == 0 {
        return Err(contract("elimination batch needs a negative edge"));
    }
    let n = g.n();
    let r = ceil_root9(k);
    let beta = r + 1;
    let params = BetweennessParams { beta, tau: r.min(n), c: cfg.betweenness_c };
    let budget = 10 * ceil_lg(n);
    let mut times = StageTimes::default();
    let mut restarts = 0;
    let record = |branch, target, restarts, times| BatchRecord {
        k_before: k,
        k_after: k,
        r,
        branch,
        eliminated: 0,
        target,
        restarts,
        times,
    };

    for _ in 0..=budget {
        let t = Instant::now();
        let red = match betweenness_reduce(g, params, rng)? {
            Ok(red) => red,
            Err(NegativeCycle) => return Ok(BatchOutcome::NegativeCycle),
        };
        let phi1 = red.phi;
        let g1 = g.reweight(&phi1)?;
        times.betweenness_ms += ms(t);
        if let Some(a) = audit.as_deref_mut() {
            a.prices.push(("betweenness", g.is_valid_price(&phi1)));
            a.samples.push(sample_is_nonnegative(&g1, &red.sample, beta)?);
        }
        if g1.count_negative() == 0 {
            return Ok(BatchOutcome::Eliminated {
                phi: phi1,
                record: record(Branch::Betweenness, k, restarts, times),
                layered: None,
            });
        }

        let t = Instant::now();
        let (found, crust_restarts) = find_sandwich_or_is(&g1, cfg.crust, rng)?;
        restarts += crust_restarts;
        times.search_ms += ms(t);
        let mut sandwich = match found {
            SandwichOrIs::Cycle => return Ok(BatchOutcome::NegativeCycle),
            SandwichOrIs::Independent(set) => {
                let t = Instant::now();
                let phi_is = eliminate_independent(&g1, &set)?;
                times.independent_ms += ms(t);
                let phi = &phi1 + &phi_is;
                if let Some(a) = audit.as_deref_mut() {
                    a.prices.push(("independent-set", g1.is_valid_price(&phi_is)));
                    a.prices.push(("batch", g.is_valid_price(&phi)));
                }
                return Ok(BatchOutcome::Eliminated {
                    phi,
                    record: record(Branch::IndependentSet, set.len(), restarts, times),
                    layered: None,
                });
            }
            SandwichOrIs::Sandwich(s) => s,
        };
        sandwich.u.truncate(ceil_cbrt(k));

        let t = Instant::now();
        let phi2 = sandwich_price(&g1, &sandwich, beta)?;
        let g2 = g1.reweight(&phi2)?;
        times.sandwich_price_ms += ms(t);
        if let Some(a) = audit.as_deref_mut() {
            a.prices.push(("sandwich", g1.is_valid_price(&phi2)));
        }

        let t = Instant::now();
        let gate = check_remote(&g2, &sandwich.u, r)?;
        times.remote_check_ms += ms(t);
        if let Some(a) = audit.as_deref_mut() {
            let recomputed = gate.remote.then(|| recompute_reach(&g2, &sandwich.u, r)).transpose()?;
            a.remote.push(RemoteAudit { n, r, gate_reach: gate.reach, passed: gate.remote, recomputed });
        }
        if !gate.remote {
            restarts += 1;
            continue;
        }

        let t = Instant::now();
        let mut tails = vec![false; n];
        for &u in &sandwich.u {
            tails[u] = true;
        }
        let out_u: Vec<EdgeId> = g2.negative_edge_ids().iter().copied().filter(|&e| tails[g2.src(e)]).collect();
        let (phi3, hstats) = eliminate_remote(&g2, &out_u, r)?;
        times.hop_reduction_ms += ms(t);
        let phi3 = match phi3 {
            Ok(phi) => phi,
            Err(NegativeCycle) => return Ok(BatchOutcome::NegativeCycle),
        };
        let phi = &(&phi1 + &phi2) + &phi3;
        if let Some(a) = audit.as_deref_mut() {
            a.prices.push(("hop-reduction", g2.is_valid_price(&phi3)));
            a.prices.push(("batch", g.is_valid_price(&phi)));
        }
        return Ok(BatchOutcome::Eliminated {
            phi,
            record: record(Branch::Sandwich, out_u.len(), restarts, times),
            layered: Some(hstats),
        });
    }
    Err(Error::RestartBudgetExhausted { stage: "elimination batch", budget })
}

/// `|reach^r(U)|` in `G^{out(U)}`, by the hop DP oracle when the graph is
/// small enough and by per-vertex searches otherwise.
fn recompute_reach<W: Weight>(g: &Graph<W>, u: &[VertexId], r: usize) -> Result<usize> {
    let sub = g.restrict_to_tails(u);
    if g.n() <= ORACLE_HOP_DP_LIMIT {
        let table = oracle_hop_dp(&sub, u, r)?;
        return Ok(table[r].iter().filter(|d| d.is_negative()).count());
    }
    let mut hit = vec![false; g.n()];
    let mut bfd = Bfd::new(&sub)?;
    for &x in u {
        for v in bfd.run(&[x], r, BfdOptions::LAST)?.negative_reach() {
            hit[v] = true;
        }
    }
    Ok(hit.iter().filter(|&&h| h).count())
}

pub fn solve_sssp<W: Weight>(g: &Graph<W>, source: VertexId, seed: u64) -> Result<SsspResult<W>> {
    Ok(solve_sssp_with(g, source, &SolverConfig::with_seed(seed))?.0)
}

/// Full pipeline: normalize, eliminate in batches, finish with Dijkstra.
/// Negative cycles anywhere in `g` are reported.
pub fn solve_sssp_with<W: Weight>(
    g: &Graph<W>,
    source: VertexId,
    cfg: &SolverConfig,
) -> Result<(SsspResult<W>, SolverStats)> {
    g.check_vertex(source)?;
    let start = Instant::now();
    let (gn, map) = normalize(g);
    let mut stats = SolverStats {
        n: g.n(),
        m: g.m(),
        k: g.count_negative(),
        normalized_n: gn.n(),
        normalized_m: gn.m(),
        batches: Vec::new(),
        finish: Finish::Dijkstra,
        normalize_ms: ms(start),
        batches_ms: 0.0,
        finish_ms: 0.0,
        total_ms: 0.0,
        layered: Vec::new(),
        audit: cfg.audit.then(Audit::default),
    };
    // The pipeline assumes a valid weighting of the input's own signs.
    let gn = gn.reclassified();
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut phi = PriceFunction::zero(gn.n());
    let mut cur = gn.clone();

    let t = Instant::now();
    let cycle = loop {
        let k = cur.count_negative();
        if k == 0 {
            break false;
        }
        if k <= cfg.k0 {
            stats.finish = Finish::Cutoff;
            break !finish_with_bfd(&mut cur, &mut phi, &gn, &mut stats)?;
        }
        match eliminate_batch(&cur, cfg, &mut rng, stats.audit.as_mut()) {
            Ok(BatchOutcome::NegativeCycle) => break true,
            Ok(BatchOutcome::Eliminated { phi: step, mut record, layered }) => {
                cur = cur.reweight(&step)?.reclassified();
                phi.add_assign(&step);
                record.k_after = cur.count_negative();
                record.eliminated = k - record.k_after;
                stats.batches.push(record);
                stats.layered.extend(layered);
                if let Some(a) = stats.audit.as_mut() {
                    a.prices.push(("accumulated", gn.is_valid_price(&phi)));
                }
            }
            Err(Error::RestartBudgetExhausted { .. }) => {
                stats.finish = Finish::Fallback;
                break !finish_with_bfd(&mut cur, &mut phi, &gn, &mut stats)?;
            }
            Err(e) => return Err(e),
        }
    };
    stats.batches_ms = ms(t);

    let t = Instant::now();
    let result = if cycle {
        stats.finish = Finish::Cycle;
        SsspResult::NegativeCycle
    } else {
        let s = map.to_normalized(source);
        let dphi = dijkstra(&cur, s)?;
        let dist = (0..g.n())
            .map(|v| {
                let u = map.to_normalized(v);
                match dphi[u] {
                    Dist::Finite(d) => Dist::Finite(d - phi[s] + phi[u]),
                    Dist::Inf => Dist::Inf,
                }
            })
            .collect();
        SsspResult::Distances(dist)
    };
    stats.finish_ms = ms(t);
    stats.total_ms = ms(start);
    Ok((result, stats))
}

/// Removes all remaining negative edges with Johnson's price function.
/// Returns false on a negative cycle.
fn finish_with_bfd<W: Weight>(
    cur: &mut Graph<W>,
    phi: &mut PriceFunction<W>,
    gn: &Graph<W>,
    stats: &mut SolverStats,
) -> Result<bool> {
    match johnson_bfd(cur)? {
        Err(NegativeCycle) => Ok(false),
        Ok(step) => {
            if let Some(a) = stats.audit.as_mut() {
                a.prices.push(("cutoff", cur.is_valid_price(&step)));
            }
            *cur = cur.reweight(&step)?.reclassified();
            phi.add_assign(&step);
            if let Some(a) = stats.audit.as_mut() {
                a.prices.push(("accumulated", gn.is_valid_price(phi)));
            }
            Ok(true)
        }
    }
}

/// Reference pipeline without batches: Johnson's price function by one
/// full-length BFD, then Dijkstra.
pub fn solve_bfd<W: Weight>(g: &Graph<W>, source: VertexId) -> Result<SsspResult<W>> {
    g.check_vertex(source)?;
    let g = g.reclassified();
    let phi = match johnson_bfd(&g)? {
        Ok(phi) => phi,
        Err(NegativeCycle) => return Ok(SsspResult::NegativeCycle),
    };
    let h = g.reweight(&phi)?;
    let d = dijkstra(&h, source)?;
    Ok(SsspResult::Distances(
        d.into_iter().enumerate().map(|(v, d)| d.plus(phi[v]).plus(-phi[source])).collect(),
    ))
}

/// Whether `dist` is a shortest-path fixpoint from `source`: the source
/// has distance 0 and every vertex is either unreachable or tight with
/// some in-edge, with no edge left to relax.
pub fn is_relaxation_fixpoint<W: Weight>(g: &Graph<W>, source: VertexId, dist: &[Dist<W>]) -> bool {
    if dist.len() != g.n() || dist[source] != Dist::ZERO {
        return false;
    }
    let no_relax = (0..g.m()).all(|e| !(dist[g.src(e)].plus(g.weight(e)) < dist[g.dst(e)]));
    let tight = (0..g.n()).all(|v| {
        v == source
            || dist[v] == Dist::Inf
            || g.in_edge_ids(v).iter().any(|&e| dist[g.src(e)].plus(g.weight(e)) == dist[v])
    });
    no_relax && tight
}
