use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::oracle::{oracle_bellman_ford, OracleResult};
use crate::error::{Error, Result};
use crate::graph::{Graph, VertexId};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Tag {
    Uniform,
    SandwichPlanted,
    CyclePlanted,
    Layered,
    Grid,
}

impl Tag {
    pub const ALL: [Tag; 5] = [Tag::Uniform, Tag::SandwichPlanted, Tag::CyclePlanted, Tag::Layered, Tag::Grid];

    pub fn name(self) -> &'static str {
        match self {
            Tag::Uniform => "uniform",
            Tag::SandwichPlanted => "sandwich-planted",
            Tag::CyclePlanted => "cycle-planted",
            Tag::Layered => "layered",
            Tag::Grid => "grid",
        }
    }
}

impl fmt::Display for Tag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Tag {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Tag::ALL
            .into_iter()
            .find(|t| t.name() == s)
            .ok_or_else(|| Error::Infeasible(format!("unknown structure tag {s:?}")))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct InstanceSpec {
    pub n: usize,
    pub m: usize,
    /// Number of negative edges.
    pub k: usize,
    /// Inclusive weight range; negative edges draw from `[lo, -1]` and the
    /// others from `[0, hi]`.
    pub weights: (i64, i64),
    pub tag: Tag,
    pub seed: u64,
}

impl InstanceSpec {
    pub const DEFAULT_WEIGHTS: (i64, i64) = (-100, 1000);

    pub fn new(tag: Tag, n: usize, m: usize, k: usize, seed: u64) -> Self {
        InstanceSpec { n, m, k, weights: Self::DEFAULT_WEIGHTS, tag, seed }
    }

    pub fn uniform(n: usize, m: usize, k: usize, seed: u64) -> Self {
        Self::new(Tag::Uniform, n, m, k, seed)
    }
}

const MAX_REPAIRS: usize = 10_000;

/// Generates the instance described by `spec`. The output has exactly `n`
/// vertices, `m` distinct non-loop edges, and `k` negative edges. Every
/// tag except `cycle-planted` is checked cycle-free by the Bellman-Ford
/// oracle before it is returned; `cycle-planted` always has a negative
/// cycle. Repairs lift a nonnegative edge on a negative cycle just enough
/// to close it, so such edges may end up above the weight range. With
/// `k <= m / 2` a repair always exists.
pub fn generate(spec: &InstanceSpec) -> Result<Graph<i64>> {
    check_feasible(spec)?;
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let mut b = EdgeSet::default();
    let mut planted_neg = Vec::new();
    let mut planted_pos = Vec::new();
    let (lo, hi) = spec.weights;
    let n = spec.n;

    match spec.tag {
        Tag::Uniform => {
            if spec.m + 1 >= n {
                let mut order: Vec<VertexId> = (1..n).collect();
                order.shuffle(&mut rng);
                order.insert(0, 0);
                for i in 1..n {
                    let parent = order[rng.gen_range(0..i)];
                    b.insert(parent, order[i]);
                }
            }
        }
        Tag::CyclePlanted => {
            let mut vs: Vec<VertexId> = (0..n).collect();
            vs.shuffle(&mut rng);
            let (a, c, d) = (vs[0], vs[1], vs[2]);
            // One negative edge of weight lo and two short positive edges
            // keep the triangle negative.
            let short = ((-lo - 1) / 2).max(0);
            planted_neg.push((b.insert(a, c), lo));
            planted_pos.push((b.insert(c, d), rng.gen_range(0..=short)));
            planted_pos.push((b.insert(d, a), rng.gen_range(0..=short)));
        }
        Tag::SandwichPlanted => {
            // Each gadget: x -> a is negative and a fans out cheaply to its
            // share of U and to y, so x reaches every u and y in one hop;
            // every u has a negative edge into y, and y leads on through a
            // negative edge to z.
            let gadgets = sandwich_gadgets(spec.k);
            let size = spec.k / 2;
            let mut vs: Vec<VertexId> = (0..n).collect();
            vs.shuffle(&mut rng);
            let cheap = ((-lo - 1) / 2).max(0);
            let mut next = 0;
            for i in 0..gadgets {
                let share = size / gadgets + usize::from(i < size % gadgets);
                let (x, a, y, z) = (vs[next], vs[next + 1], vs[next + 2], vs[next + 3]);
                planted_neg.push((b.insert(x, a), lo));
                planted_neg.push((b.insert(y, z), rng.gen_range(lo..=-1)));
                planted_pos.push((b.insert(a, y), rng.gen_range(0..=cheap)));
                for &u in &vs[next + 4..next + 4 + share] {
                    planted_pos.push((b.insert(a, u), rng.gen_range(0..=cheap)));
                    planted_neg.push((b.insert(u, y), rng.gen_range(lo..=-1)));
                }
                next += 4 + share;
            }
        }
        Tag::Layered => {
            let width = (n as f64).sqrt().ceil().max(1.0) as usize;
            let mut forward: Vec<(VertexId, VertexId)> = Vec::new();
            for u in 0..n {
                let next = (u / width + 1) * width;
                forward.extend((next..(next + width).min(n)).map(|v| (u, v)));
            }
            forward.shuffle(&mut rng);
            for (u, v) in forward.into_iter().take(spec.m) {
                b.insert(u, v);
            }
            // Top up with other forward pairs so the edge set stays acyclic
            // for as long as that is possible.
            if b.len() < spec.m {
                let mut rest: Vec<_> = (0..n)
                    .flat_map(|u| (u + 1..n).map(move |v| (u, v)))
                    .filter(|&(u, v)| !b.contains(u, v))
                    .collect();
                rest.shuffle(&mut rng);
                for (u, v) in rest.into_iter().take(spec.m - b.len()) {
                    b.insert(u, v);
                }
            }
        }
        Tag::Grid => {
            let width = (n as f64).sqrt().ceil().max(1.0) as usize;
            let id = |row: usize, col: usize| row * width + col;
            // Row paths plus the first column reach everything from 0.
            let mut spanning = Vec::new();
            let mut other = Vec::new();
            for v in 0..n {
                let (row, col) = (v / width, v % width);
                if col + 1 < width && v + 1 < n {
                    spanning.push((v, v + 1));
                    other.push((v + 1, v));
                }
                if id(row + 1, col) < n {
                    let below = id(row + 1, col);
                    if col == 0 {
                        spanning.push((v, below));
                    } else {
                        other.push((v, below));
                    }
                    other.push((below, v));
                }
            }
            other.shuffle(&mut rng);
            for (u, v) in spanning.into_iter().chain(other).take(spec.m) {
                b.insert(u, v);
            }
        }
    }

    let pool: Vec<VertexId> = match spec.tag {
        // Gadgets stay separate components.
        Tag::SandwichPlanted => (0..n).filter(|&v| !b.touches(v)).collect(),
        _ => (0..n).collect(),
    };
    fill_random(&mut b, spec.m, &pool, &mut rng);

    let mut weights = vec![0i64; b.len()];
    let mut planted = vec![false; b.len()];
    for &(e, w) in planted_neg.iter().chain(&planted_pos) {
        weights[e] = w;
        planted[e] = true;
    }
    // Negative edges go forward in a random order where possible, so that
    // repairs only ever meet cycles with a nonnegative edge on them.
    let mut rank: Vec<usize> = (0..n).collect();
    rank.shuffle(&mut rng);
    if 2 * b.pairs.iter().filter(|&&(u, v)| rank[u] < rank[v]).count() < b.len() {
        for r in &mut rank {
            *r = n - 1 - *r;
        }
    }
    let forward = |e: usize| rank[b.pairs[e].0] < rank[b.pairs[e].1];
    let mut free: Vec<usize> = (0..b.len()).filter(|&e| !planted[e]).collect();
    free.shuffle(&mut rng);
    free.sort_by_key(|&e| !forward(e));
    let extra_neg = spec.k - planted_neg.len();
    for (i, &e) in free.iter().enumerate() {
        weights[e] = if i < extra_neg { rng.gen_range(lo..=-1) } else { rng.gen_range(0..=hi) };
    }

    let build = |weights: &[i64]| {
        Graph::from_weighted_edges(n, b.pairs.iter().zip(weights).map(|(&(u, v), &w)| (u, v, w)))
    };
    if spec.tag == Tag::CyclePlanted {
        return build(&weights);
    }

    let all: Vec<VertexId> = (0..n).collect();
    for _ in 0..MAX_REPAIRS {
        let g = build(&weights)?;
        let OracleResult::NegativeCycle { witness } = oracle_bellman_ford(&g, &all)? else {
            return Ok(g);
        };
        let cycle: Vec<usize> = witness.windows(2).map(|p| b.index[&(p[0], p[1])]).collect();
        let total: i64 = cycle.iter().map(|&e| weights[e]).sum();
        let mut raisable: Vec<usize> = cycle.iter().copied().filter(|&e| weights[e] >= 0).collect();
        if raisable.iter().any(|&e| !planted[e]) {
            raisable.retain(|&e| !planted[e]);
        }
        if let Some(&e) = raisable.choose(&mut rng) {
            // Lifts the cycle to weight zero; raising never creates a cycle.
            weights[e] -= total;
            continue;
        }
        let flippable: Vec<usize> = cycle.iter().copied().filter(|&e| !planted[e]).collect();
        let mut donors: Vec<usize> = (0..b.len()).filter(|&e| !planted[e] && weights[e] >= 0).collect();
        if donors.iter().any(|&e| forward(e)) {
            donors.retain(|&e| forward(e));
        }
        let (Some(&e), Some(&d)) = (flippable.choose(&mut rng), donors.choose(&mut rng)) else {
            return Err(Error::Infeasible("negative cycle cannot be repaired without changing k".into()));
        };
        // Move the negative edge elsewhere so k stays fixed.
        weights[e] = rng.gen_range(0..=hi);
        weights[d] = rng.gen_range(lo..=-1);
    }
    Err(Error::Infeasible(format!("no cycle-free weighting after {MAX_REPAIRS} repairs")))
}

fn check_feasible(spec: &InstanceSpec) -> Result<()> {
    let InstanceSpec { n, m, k, weights: (lo, hi), tag, .. } = *spec;
    let fail = |msg: String| Err(Error::Infeasible(msg));
    if n == 0 && m > 0 {
        return fail("edges need vertices".into());
    }
    if m > n * n.saturating_sub(1) {
        return fail(format!("{m} distinct edges do not fit on {n} vertices"));
    }
    if k > m {
        return fail(format!("k = {k} exceeds m = {m}"));
    }
    if k > 0 && lo >= 0 {
        return fail("negative edges need a negative lower weight bound".into());
    }
    if hi < 0 || lo > hi {
        return fail(format!("bad weight range [{lo}, {hi}]"));
    }
    match tag {
        Tag::CyclePlanted if n < 3 || m < 3 || k < 1 => fail("cycle-planted needs n >= 3, m >= 3, k >= 1".into()),
        Tag::SandwichPlanted => {
            let g = sandwich_gadgets(k);
            let (used, planted) = (4 * g + k / 2, 3 * g + 2 * (k / 2));
            let free = n.saturating_sub(used);
            if n < used || m < planted || 2 * g + k / 2 > k || m > planted + free * free.saturating_sub(1) {
                fail(format!("{g} sandwich gadgets of total size {} do not fit", k / 2))
            } else {
                Ok(())
            }
        }
        Tag::Layered | Tag::Grid if m + 1 < n => fail(format!("{tag} needs m >= n - 1")),
        _ => Ok(()),
    }
}

/// Number of disjoint sandwich gadgets sharing the `k / 2` planted middle
/// vertices, at most `GADGET_SIZE` each. A sampled reweighting flattens
/// every gadget it touches, so several small ones keep some sandwich intact.
fn sandwich_gadgets(k: usize) -> usize {
    (k / 2).div_ceil(GADGET_SIZE).max(1)
}

const GADGET_SIZE: usize = 20;

#[derive(Default)]
struct EdgeSet {
    pairs: Vec<(VertexId, VertexId)>,
    index: HashMap<(VertexId, VertexId), usize>,
}

impl EdgeSet {
    fn len(&self) -> usize {
        self.pairs.len()
    }

    fn touches(&self, v: VertexId) -> bool {
        self.pairs.iter().any(|&(a, c)| a == v || c == v)
    }

    fn contains(&self, u: VertexId, v: VertexId) -> bool {
        self.index.contains_key(&(u, v))
    }

    fn insert(&mut self, u: VertexId, v: VertexId) -> usize {
        debug_assert!(u != v);
        let next = self.pairs.len();
        *self.index.entry((u, v)).or_insert_with(|| {
            self.pairs.push((u, v));
            next
        })
    }
}

/// Adds random edges with both ends in `pool` until there are `m` edges.
fn fill_random(b: &mut EdgeSet, m: usize, pool: &[VertexId], rng: &mut ChaCha8Rng) {
    let p = pool.len();
    if 2 * m.saturating_sub(b.len()) <= p * p.saturating_sub(1) / 2 {
        while b.len() < m {
            let u = pool[rng.gen_range(0..p)];
            let v = pool[rng.gen_range(0..p)];
            if u != v {
                b.insert(u, v);
            }
        }
    } else {
        let mut rest: Vec<_> = pool
            .iter()
            .flat_map(|&u| pool.iter().map(move |&v| (u, v)))
            .filter(|&(u, v)| u != v && !b.contains(u, v))
            .collect();
        rest.shuffle(rng);
        let need = m - b.len();
        for (u, v) in rest.into_iter().take(need) {
            b.insert(u, v);
        }
    }
}
