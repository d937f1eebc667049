//! Negative sandwiches and 1-hop independent sets.
//!
//! A negative sandwich `(x, U, y)` is a set `U` of negative vertices with
//! `dist^1(x, u) < 0` and `dist^1(u, y) < 0` for all `u` in `U`. A 1-hop
//! independent set is a set of negative vertices no two of which are joined
//! by a negative 1-hop path in either direction. The search below finds one
//! of the two, of size about `k^(1/3)`, or proves a negative cycle.

use rand::seq::SliceRandom;
use rand::Rng;

use crate::betweenness::ceil_ln;
use crate::error::{contract, Error, Result};
use crate::graph::{Graph, PriceFunction, VertexId};
use crate::hoplimited::{Bfd, BfdOptions};
use crate::par;
use crate::weight::{Dist, Weight};
use crate::NegativeCycle;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HlPartition {
    pub heavy: Vec<VertexId>,
    pub light: Vec<VertexId>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NegativeSandwich {
    pub x: VertexId,
    pub u: Vec<VertexId>,
    pub y: VertexId,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CrustParams {
    /// Round constant of the heavy/light partition.
    pub c: usize,
    /// Independent-set attempts per restart, in units of `ceil(lg n)`.
    pub c_prime: usize,
}

impl Default for CrustParams {
    fn default() -> Self {
        CrustParams { c: 9, c_prime: 8 }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Crust {
    /// Every `u` has `dist^1(u, y) < 0`.
    Sandwich { y: VertexId, u: Vec<VertexId> },
    Independent(Vec<VertexId>),
    Cycle,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SandwichOrIs {
    Sandwich(NegativeSandwich),
    Independent(Vec<VertexId>),
    Cycle,
}

/// `max(1, ceil(lg n))`.
pub(crate) fn ceil_lg(n: usize) -> usize {
    (n.max(2) - 1).ilog2() as usize + 1
}

/// Smallest integer `r` with `r^3 >= k`.
pub fn ceil_cbrt(k: usize) -> usize {
    let mut r = (k as f64).cbrt().round() as usize;
    while r.pow(3) < k {
        r += 1;
    }
    while r > 0 && (r - 1).pow(3) >= k {
        r -= 1;
    }
    r
}

/// Restart budget of the crust search on `n` vertices: `10 ceil(lg n)`.
pub fn crust_restart_budget(n: usize) -> usize {
    10 * ceil_lg(n)
}

fn check_rho(rho: usize, k_hat: usize) -> Result<()> {
    if rho == 0 || rho > k_hat {
        Err(contract(format!("rho = {rho} outside [1, {k_hat}]")))
    } else {
        Ok(())
    }
}

/// Splits `u0` into heavy and light vertices. Over `c * ceil(ln n)` rounds,
/// each `u` in `u0` joins a sample with probability `rho / |u0|`; a vertex
/// is heavy when it lies in the negative 1-hop reach of at least half the
/// samples.
pub fn hl_partition<W: Weight, R: Rng + ?Sized>(
    g: &Graph<W>,
    u0: &[VertexId],
    rho: usize,
    c: usize,
    rng: &mut R,
) -> Result<HlPartition> {
    g.require_valid("heavy/light partition")?;
    let k_hat = u0.len();
    check_rho(rho, k_hat)?;
    for &u in u0 {
        g.check_vertex(u)?;
    }
    let log = ceil_ln(g.n());
    let samples: Vec<Vec<VertexId>> = (0..c * log)
        .map(|_| u0.iter().copied().filter(|_| rng.gen_range(0..k_hat) < rho).collect())
        .collect();
    let reaches = par::map_with(
        &samples,
        || Bfd::new_unchecked(g),
        |bfd, sample: &Vec<VertexId>| {
            if sample.is_empty() {
                Vec::new()
            } else {
                bfd.run(sample, 1, BfdOptions::LAST).expect("sample in range").negative_reach()
            }
        },
    );
    let mut count = vec![0usize; g.n()];
    for reach in &reaches {
        for &v in reach {
            count[v] += 1;
        }
    }
    let (heavy, light) = u0.iter().partition(|&&u| 2 * count[u] >= c * log);
    Ok(HlPartition { heavy, light })
}

/// Samples `ceil(rho / 4)` vertices of `u0` and drops those with a negative
/// 1-hop path from another sampled vertex. A sampled vertex reached from
/// itself proves a negative cycle.
pub fn rand_is<W: Weight, R: Rng + ?Sized>(
    g: &Graph<W>,
    u0: &[VertexId],
    rho: usize,
    rng: &mut R,
) -> Result<std::result::Result<Vec<VertexId>, NegativeCycle>> {
    let mut bfd = Bfd::new(g)?;
    rand_is_with(&mut bfd, u0, rho, rng)
}

fn rand_is_with<W: Weight, R: Rng + ?Sized>(
    bfd: &mut Bfd<'_, W>,
    u0: &[VertexId],
    rho: usize,
    rng: &mut R,
) -> Result<std::result::Result<Vec<VertexId>, NegativeCycle>> {
    check_rho(rho, u0.len())?;
    let mut sample: Vec<VertexId> = u0.choose_multiple(rng, rho.div_ceil(4)).copied().collect();
    sample.sort_unstable();
    let t = bfd.run(&sample, 1, BfdOptions { all_rounds: false, witnesses: true })?;
    let d = t.final_round();
    if sample.iter().any(|&u| d[u].is_negative() && t.witness(u) == Some(u)) {
        return Ok(Err(NegativeCycle));
    }
    Ok(Ok(sample.into_iter().filter(|&u| !d[u].is_negative()).collect()))
}

/// Finds either a crust `(y, U)` with `|U| >= |u0| / (8 rho)` or a 1-hop
/// independent set of size at least `rho / 16`, restarting with fresh
/// randomness until one is found. Returns the outcome and the number of
/// restarts used.
pub fn find_crust<W: Weight, R: Rng + ?Sized>(
    g: &Graph<W>,
    u0: &[VertexId],
    rho: usize,
    params: CrustParams,
    rng: &mut R,
) -> Result<(Crust, usize)> {
    g.require_valid("crust search")?;
    let k_hat = u0.len();
    check_rho(rho, k_hat)?;
    let n = g.n();
    let budget = crust_restart_budget(n);
    let gt = g.transpose();
    let mut fwd = Bfd::new_unchecked(g);
    let mut bwd = Bfd::new_unchecked(&gt);
    for restart in 0..=budget {
        let part = hl_partition(g, u0, rho, params.c, rng)?;
        if let Some(&y) = part.heavy.first() {
            let to_y = bwd.run(&[y], 1, BfdOptions::LAST)?;
            let d = to_y.final_round();
            let u: Vec<VertexId> = u0.iter().copied().filter(|&u| d[u].is_negative()).collect();
            if 8 * u.len() * rho >= k_hat {
                return Ok((Crust::Sandwich { y, u }, restart));
            }
        } else {
            for _ in 0..params.c_prime * ceil_lg(n) {
                match rand_is_with(&mut fwd, u0, rho, rng)? {
                    Err(NegativeCycle) => return Ok((Crust::Cycle, restart)),
                    Ok(set) if 16 * set.len() >= rho => return Ok((Crust::Independent(set), restart)),
                    Ok(_) => {}
                }
            }
        }
    }
    Err(Error::RestartBudgetExhausted { stage: "crust search", budget })
}

/// Runs the crust search from both sides with `rho = ceil(k^(1/3))`, where
/// `k` is the number of negative vertices. Returns the outcome and the
/// total number of restarts.
pub fn find_sandwich_or_is<W: Weight, R: Rng + ?Sized>(
    g: &Graph<W>,
    params: CrustParams,
    rng: &mut R,
) -> Result<(SandwichOrIs, usize)> {
    let u0 = current_negative_vertices(g);
    if u0.is_empty() {
        return Err(contract("sandwich search needs at least one negative edge"));
    }
    let rho = ceil_cbrt(u0.len());
    let (first, r1) = find_crust(g, &u0, rho, params, rng)?;
    let (y, u1) = match first {
        Crust::Sandwich { y, u } => (y, u),
        Crust::Independent(set) => return Ok((SandwichOrIs::Independent(set), r1)),
        Crust::Cycle => return Ok((SandwichOrIs::Cycle, r1)),
    };
    let gt = g.transpose();
    let rho2 = rho.min(u1.len());
    let (second, r2) = find_crust(&gt, &u1, rho2, params, rng)?;
    let out = match second {
        Crust::Sandwich { y: x, u } => SandwichOrIs::Sandwich(NegativeSandwich { x, u, y }),
        // 1-hop independence is symmetric, so a set found in the transpose
        // is independent in g as well.
        Crust::Independent(set) => SandwichOrIs::Independent(set),
        Crust::Cycle => SandwichOrIs::Cycle,
    };
    Ok((out, r1 + r2))
}

/// Tails of edges whose current weight is negative, ascending.
pub fn current_negative_vertices<W: Weight>(g: &Graph<W>) -> Vec<VertexId> {
    let mut vs: Vec<_> =
        g.negative_edge_ids().iter().filter(|&&e| g.weight(e).is_negative()).map(|&e| g.src(e)).collect();
    vs.dedup();
    vs
}

/// Whether `s` satisfies the sandwich conditions under `g`'s weights.
pub fn is_sandwich<W: Weight>(g: &Graph<W>, s: &NegativeSandwich) -> Result<bool> {
    let from_x = Bfd::new(g)?.run(&[s.x], 1, BfdOptions::LAST)?;
    let gt = g.transpose();
    let to_y = Bfd::new(&gt)?.run(&[s.y], 1, BfdOptions::LAST)?;
    Ok(sandwich_holds(s, from_x.final_round(), to_y.final_round()))
}

fn sandwich_holds<W: Weight>(s: &NegativeSandwich, from_x: &[Dist<W>], to_y: &[Dist<W>]) -> bool {
    s.u.iter().all(|&u| from_x[u].is_negative() && to_y[u].is_negative())
}

/// Whether no two distinct vertices of `set` are joined by a negative
/// 1-hop path.
pub fn is_independent<W: Weight>(g: &Graph<W>, set: &[VertexId]) -> Result<bool> {
    let mut bfd = Bfd::new(g)?;
    for &u in set {
        let d = bfd.run(&[u], 1, BfdOptions::LAST)?;
        if set.iter().any(|&v| v != u && d.final_round()[v].is_negative()) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// `phi(v) = min(0, max(dist^beta(x, v), -dist^beta(v, y)))`.
///
/// Valid for any sandwich. Afterwards no vertex outside the `beta`-hop
/// betweenness of `(x, y)` lies in the negative `(beta - 1)`-hop reach
/// of `U`.
pub fn sandwich_price<W: Weight>(g: &Graph<W>, s: &NegativeSandwich, beta: usize) -> Result<PriceFunction<W>> {
    if beta < 2 {
        return Err(contract("sandwich price needs beta > 1"));
    }
    let from_x = Bfd::new(g)?.run(&[s.x], beta, BfdOptions::ALL)?;
    let gt = g.transpose();
    let to_y = Bfd::new_unchecked(&gt).run(&[s.y], beta, BfdOptions::ALL)?;
    if !sandwich_holds(s, from_x.round(1).unwrap(), to_y.round(1).unwrap()) {
        return Err(contract(format!("({}, U, {}) is not a negative sandwich", s.x, s.y)));
    }
    let phi = from_x
        .final_round()
        .iter()
        .zip(to_y.final_round())
        .map(|(&dx, &dy)| {
            let m = match (dx, dy) {
                (Dist::Inf, _) => return W::ZERO,
                (Dist::Finite(a), Dist::Inf) => a,
                (Dist::Finite(a), Dist::Finite(b)) => {
                    if a > -b {
                        a
                    } else {
                        -b
                    }
                }
            };
            if m < W::ZERO {
                m
            } else {
                W::ZERO
            }
        })
        .collect();
    Ok(PriceFunction::from_vec(phi))
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn rng(seed: u64) -> ChaCha8Rng {
        ChaCha8Rng::seed_from_u64(seed)
    }

    /// u1..u8 each with a negative edge into z, z with a negative edge to w.
    fn star() -> (Graph<i64>, Vec<VertexId>) {
        let z = 8;
        let mut edges: Vec<(usize, usize, i64)> = (0..8).map(|u| (u, z, -1)).collect();
        edges.push((z, 9, -1));
        (Graph::from_weighted_edges(10, edges).unwrap(), (0..9).collect())
    }

    #[test]
    fn integer_roots() {
        assert_eq!(ceil_cbrt(1), 1);
        assert_eq!(ceil_cbrt(8), 2);
        assert_eq!(ceil_cbrt(9), 3);
        assert_eq!(ceil_cbrt(1000), 10);
        assert_eq!(ceil_cbrt(1001), 11);
        assert_eq!(ceil_lg(1), 1);
        assert_eq!(ceil_lg(8), 3);
        assert_eq!(ceil_lg(9), 4);
    }

    #[test]
    fn partition_covers_u0() {
        let (g, u0) = star();
        for seed in 0..20 {
            let p = hl_partition(&g, &u0, 3, 9, &mut rng(seed)).unwrap();
            let mut all = [p.heavy.clone(), p.light.clone()].concat();
            all.sort_unstable();
            assert_eq!(all, u0);
        }
    }

    #[test]
    fn star_center_is_heavy() {
        let (g, u0) = star();
        let hits = (0..100).filter(|&s| hl_partition(&g, &u0, 3, 9, &mut rng(s)).unwrap().heavy.contains(&8)).count();
        assert!(hits >= 95, "{hits}");
    }

    #[test]
    fn star_crust() {
        let (g, u0) = star();
        let (crust, _) = find_crust(&g, &u0, 3, CrustParams::default(), &mut rng(1)).unwrap();
        let Crust::Sandwich { y, u } = crust else { panic!("expected a crust, got {crust:?}") };
        assert_eq!(y, 8);
        assert_eq!(u, (0..8).collect::<Vec<_>>());
    }

    #[test]
    fn rand_is_on_unrelated_vertices() {
        let g = Graph::from_weighted_edges(8, (0..4).map(|i| (i, i + 4, -1i64))).unwrap();
        let set = rand_is(&g, &[0, 1, 2, 3], 4, &mut rng(0)).unwrap().unwrap();
        assert_eq!(set.len(), 1);
        let set = rand_is(&g, &[0, 1, 2, 3], 3, &mut rng(0)).unwrap().unwrap();
        assert_eq!(set.len(), 1);
    }

    #[test]
    fn rand_is_reports_self_reaching_vertex() {
        let g = Graph::from_weighted_edges(2, [(0, 1, -2i64), (1, 0, 1)]).unwrap();
        assert_eq!(rand_is(&g, &[0], 1, &mut rng(0)).unwrap(), Err(NegativeCycle));
    }

    #[test]
    fn chain_price() {
        // x=0 -> u=1 (-1), u -> y=2 (-1)
        let g = Graph::from_weighted_edges(3, [(0, 1, -1i64), (1, 2, -1)]).unwrap();
        let s = NegativeSandwich { x: 0, u: vec![1], y: 2 };
        assert!(is_sandwich(&g, &s).unwrap());
        let phi = sandwich_price(&g, &s, 2).unwrap();
        assert_eq!(phi[1], 0);
        assert_eq!(phi[2], 0);
        assert!(g.is_valid_price(&phi));
    }

    #[test]
    fn price_rejects_non_sandwich() {
        let g = Graph::from_weighted_edges(3, [(0, 1, -1i64), (1, 2, 4)]).unwrap();
        let s = NegativeSandwich { x: 0, u: vec![1], y: 2 };
        assert!(sandwich_price(&g, &s, 2).is_err());
    }

    #[test]
    fn bipartite_sandwich_found() {
        // x=0 -> u_i -> y=1 for u_i in 2..30.
        let mut edges = vec![];
        for u in 2..30 {
            edges.push((0, u, -1i64));
            edges.push((u, 1, -1));
        }
        let g = Graph::from_weighted_edges(30, edges).unwrap();
        for seed in 0..5 {
            let (out, _) = find_sandwich_or_is(&g, CrustParams::default(), &mut rng(seed)).unwrap();
            match out {
                SandwichOrIs::Sandwich(s) => assert!(is_sandwich(&g, &s).unwrap()),
                SandwichOrIs::Independent(set) => assert!(is_independent(&g, &set).unwrap()),
                SandwichOrIs::Cycle => panic!("no cycle here"),
            }
        }
    }

    #[test]
    fn single_negative_edge() {
        let g = Graph::from_weighted_edges(2, [(0, 1, -1i64)]).unwrap();
        let (out, _) = find_sandwich_or_is(&g, CrustParams::default(), &mut rng(0)).unwrap();
        assert!(matches!(out, SandwichOrIs::Independent(ref s) if s == &vec![0]) || matches!(out, SandwichOrIs::Sandwich(_)));
    }
}
