//! Betweenness reduction.
//!
//! Samples a vertex set `T` and returns a valid price function under which
//! every `beta`-hop distance into or out of `T` is nonnegative. With high
//! probability no pair of vertices then has more than `n / tau` vertices on
//! negative `beta`-hop paths between them.

use rand::seq::SliceRandom;
use rand::Rng;

use crate::error::{contract, Error, Result};
use crate::graph::{Graph, PriceFunction, VertexId};
use crate::hoplimited::{Bfd, BfdOptions};
use crate::par;
use crate::weight::{Dist, Weight};
use crate::NegativeCycle;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct BetweennessParams {
    pub beta: usize,
    pub tau: usize,
    pub c: usize,
}

impl BetweennessParams {
    pub const DEFAULT_C: usize = 9;

    pub fn new(beta: usize, tau: usize) -> Self {
        BetweennessParams { beta, tau, c: Self::DEFAULT_C }
    }

    /// `min(n, c * tau * ceil(ln n))`.
    pub fn sample_size(&self, n: usize) -> usize {
        n.min(self.c * self.tau * ceil_ln(n))
    }
}

/// `max(1, ceil(ln n))`.
pub(crate) fn ceil_ln(n: usize) -> usize {
    ((n as f64).ln().ceil() as usize).max(1)
}

#[derive(Clone, Debug, PartialEq)]
pub struct Reduction<W> {
    pub phi: PriceFunction<W>,
    /// The sampled set `T`, ascending.
    pub sample: Vec<VertexId>,
}

/// Sample graph `H` on `V`: an edge `x -> v` of weight `dist^beta(x, v)` and
/// an edge `v -> x` of weight `dist^beta(v, x)` for each `x` in `T`, with
/// infinite entries standing for absent edges.
struct SampleGraph<W> {
    sample: Vec<VertexId>,
    from_t: Vec<Vec<Dist<W>>>,
    to_t: Vec<Vec<Dist<W>>>,
}

impl<W: Weight> SampleGraph<W> {
    /// One Bellman-Ford round over `H`, reading `d` and writing `next`.
    /// Returns whether anything decreased.
    fn relax(&self, d: &[W], next: &mut [W]) -> bool {
        next.copy_from_slice(d);
        for (i, &x) in self.sample.iter().enumerate() {
            let dx = d[x];
            for (v, w) in self.from_t[i].iter().enumerate() {
                if let Dist::Finite(w) = *w {
                    let cand = dx + w;
                    if cand < next[v] {
                        next[v] = cand;
                    }
                }
            }
            let mut best = next[x];
            for (v, w) in self.to_t[i].iter().enumerate() {
                if let Dist::Finite(w) = *w {
                    let cand = d[v] + w;
                    if cand < best {
                        best = cand;
                    }
                }
            }
            next[x] = best;
        }
        next.iter().zip(d).any(|(a, b)| a < b)
    }
}

pub fn betweenness_reduce<W: Weight, R: Rng + ?Sized>(
    g: &Graph<W>,
    params: BetweennessParams,
    rng: &mut R,
) -> Result<std::result::Result<Reduction<W>, NegativeCycle>> {
    let n = g.n();
    g.require_valid("betweenness reduction")?;
    if params.beta < 1 || params.c < 3 || params.tau < 1 || (n > 0 && params.tau > n) {
        return Err(contract(format!("bad betweenness parameters {params:?} for n = {n}")));
    }
    if n == 0 {
        return Ok(Ok(Reduction { phi: PriceFunction::zero(0), sample: vec![] }));
    }

    let t = params.sample_size(n);
    let mut ids: Vec<VertexId> = (0..n).collect();
    let (picked, _) = ids.partial_shuffle(rng, t);
    let mut sample = picked.to_vec();
    sample.sort_unstable();

    let gt = g.transpose();
    let rows = par::map_with(
        &sample,
        || (Bfd::new_unchecked(g), Bfd::new_unchecked(&gt)),
        |(fwd, bwd), &x| {
            let out = fwd.run(&[x], params.beta, BfdOptions::LAST).expect("sample vertex in range");
            let inc = bwd.run(&[x], params.beta, BfdOptions::LAST).expect("sample vertex in range");
            (out.into_final_round(), inc.into_final_round())
        },
    );
    let (from_t, to_t) = rows.into_iter().unzip();
    let h = SampleGraph { sample, from_t, to_t };

    // Simple paths in H have at most 2|T| edges.
    let ell = 2 * h.sample.len();
    let mut d = vec![W::ZERO; n];
    let mut next = vec![W::ZERO; n];
    for round in 1..=ell + 1 {
        if !h.relax(&d, &mut next) {
            return Ok(Ok(Reduction { phi: PriceFunction::from_vec(d), sample: h.sample }));
        }
        if round == ell + 1 {
            return Ok(Err(NegativeCycle));
        }
        std::mem::swap(&mut d, &mut next);
    }
    unreachable!("the loop returns by round ell + 1")
}

/// Checks that `dist^beta(x, v) >= 0` and `dist^beta(v, x) >= 0` for every
/// `x` in `sample` and every `v`.
pub fn sample_is_nonnegative<W: Weight>(g: &Graph<W>, sample: &[VertexId], beta: usize) -> Result<bool> {
    let gt = g.transpose();
    let mut fwd = Bfd::new(g)?;
    let mut bwd = Bfd::new(&gt)?;
    for &x in sample {
        for engine in [&mut fwd, &mut bwd] {
            let t = engine.run(&[x], beta, BfdOptions::LAST)?;
            if t.final_round().iter().any(|d| d.is_negative()) {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

pub const BETWEENNESS_CHECK_LIMIT: usize = 400;

/// The pair of maximum `beta`-betweenness, by brute force over all triples:
/// `bw(u, v) = |{x : dist^beta(u, x) + dist^beta(x, v) < 0}|`.
/// Ties go to the lexicographically smallest pair.
pub fn verify_betweenness<W: Weight>(g: &Graph<W>, beta: usize) -> Result<(VertexId, VertexId, usize)> {
    let n = g.n();
    if n > BETWEENNESS_CHECK_LIMIT {
        return Err(Error::SizeGuard { n, limit: BETWEENNESS_CHECK_LIMIT });
    }
    let mut engine = Bfd::new(g)?;
    let dist: Vec<Vec<Dist<W>>> =
        (0..n).map(|u| engine.run(&[u], beta, BfdOptions::LAST).map(|t| t.into_final_round())).collect::<Result<_>>()?;
    let mut best = (0, 0, 0);
    for u in 0..n {
        for v in 0..n {
            let count = (0..n).filter(|&x| dist[u][x].add_dist(dist[x][v]).is_negative()).count();
            if count > best.2 {
                best = (u, v, count);
            }
        }
    }
    Ok(best)
}
