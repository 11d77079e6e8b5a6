//! Reproducible instance families.

use std::collections::HashSet;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::graph::Graph;

pub const MAX_RANDOM_CAPACITY: u64 = 64;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Connected random graph on `n` vertices with exactly `m` edges and
/// capacities uniform in `[1, 64]`: a random spanning tree plus distinct
/// extra vertex pairs. `s = 0`, `t = n - 1`.
pub fn random_connected(n: usize, m: usize, rng: &mut impl Rng) -> Result<Graph> {
    if n < 2 {
        return Err(Error::InvalidParameter("need at least two vertices".into()));
    }
    let max_m = n * (n - 1) / 2;
    if m + 1 < n || m > max_m {
        return Err(Error::InvalidParameter(format!(
            "edge count {m} outside [{}, {max_m}] for {n} vertices",
            n - 1
        )));
    }
    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(rng);
    let mut pairs = HashSet::new();
    let mut edges = Vec::with_capacity(m);
    let mut push = |a: usize, b: usize, rng: &mut dyn rand::RngCore, edges: &mut Vec<_>| {
        let key = (a.min(b), a.max(b));
        if pairs.insert(key) {
            edges.push((a, b, rng.gen_range(1..=MAX_RANDOM_CAPACITY)));
            true
        } else {
            false
        }
    };
    for i in 1..n {
        let j = rng.gen_range(0..i);
        push(order[i], order[j], rng, &mut edges);
    }
    while edges.len() < m {
        let a = rng.gen_range(0..n);
        let b = rng.gen_range(0..n);
        if a != b {
            push(a, b, rng, &mut edges);
        }
    }
    Graph::new(n, edges, 0, n - 1)
}

/// Erdős–Rényi `G(n, p)` with random `[1, 64]` capacities, made connected
/// by adding a random spanning tree first. `s = 0`, `t = n - 1`.
pub fn erdos_renyi(n: usize, p: f64, rng: &mut impl Rng) -> Result<Graph> {
    if n < 2 || !(0.0..=1.0).contains(&p) {
        return Err(Error::InvalidParameter(format!("bad G(n, p) parameters n = {n}, p = {p}")));
    }
    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(rng);
    let mut pairs = HashSet::new();
    for i in 1..n {
        let j = rng.gen_range(0..i);
        let (a, b) = (order[i], order[j]);
        pairs.insert((a.min(b), a.max(b)));
    }
    for a in 0..n {
        for b in a + 1..n {
            if rng.gen_bool(p) {
                pairs.insert((a, b));
            }
        }
    }
    let mut pairs: Vec<_> = pairs.into_iter().collect();
    pairs.sort_unstable();
    let edges: Vec<_> = pairs
        .into_iter()
        .map(|(a, b)| (a, b, rng.gen_range(1..=MAX_RANDOM_CAPACITY)))
        .collect();
    Graph::new(n, edges, 0, n - 1)
}

/// `k` vertex-disjoint s-t paths of `k` unit edges each, plus one unit
/// shortcut edge from `s` to `t` (edge 0). `s = 0`, `t = 1`,
/// `n = 2 + k(k-1)`, `m = k² + 1`, maximum flow `k + 1`.
pub fn parallel_paths(k: usize) -> Result<Graph> {
    if k == 0 {
        return Err(Error::InvalidParameter("need at least one path".into()));
    }
    let n = 2 + k * (k - 1);
    let mut edges = vec![(0, 1, 1)];
    let mut next = 2;
    for _ in 0..k {
        let mut prev = 0;
        for _ in 0..k - 1 {
            edges.push((prev, next, 1));
            prev = next;
            next += 1;
        }
        edges.push((prev, 1, 1));
    }
    Graph::new(n, edges, 0, 1)
}

/// Random connected graphs with `n` drawn from `n_range` and an edge count
/// between `n - 1` and `min(max_m, density · n, n(n-1)/2)`.
pub fn corpus(
    count: usize,
    n_range: std::ops::RangeInclusive<usize>,
    max_m: usize,
    density: f64,
    seed: u64,
) -> Vec<Graph> {
    let mut r = rng(seed);
    (0..count)
        .map(|_| {
            let n = r.gen_range(n_range.clone());
            let hi = ((density * n as f64) as usize)
                .min(max_m)
                .min(n * (n - 1) / 2)
                .max(n - 1);
            let m = r.gen_range(n - 1..=hi);
            random_connected(n, m, &mut r).expect("parameters are in range")
        })
        .collect()
}
