//! Exact integer maximum flow and minimum cut for undirected graphs.

use std::collections::VecDeque;

use crate::error::{Error, Result};
use crate::graph::{Cut, FlowVector, Graph};

/// Largest vertex count accepted by [`enumerate_min_cut`].
pub const ENUMERATION_LIMIT: usize = 20;

#[derive(Debug, Clone, PartialEq)]
pub struct ExactResult {
    /// Integral flow, oriented tail to head.
    pub flow: FlowVector,
    pub value: u64,
    pub mincut: Cut,
}

struct Arc {
    to: usize,
    cap: u64,
}

/// Dinic's algorithm. Every undirected edge becomes a pair of opposite arcs
/// of capacity `u_e`; pushing on one arc frees the same amount on the other.
struct Dinic {
    arcs: Vec<Arc>,
    adj: Vec<Vec<usize>>,
    level: Vec<u32>,
    next: Vec<usize>,
}

impl Dinic {
    fn new(g: &Graph) -> Self {
        let mut arcs = Vec::with_capacity(2 * g.m());
        let mut adj = vec![Vec::new(); g.n()];
        for e in g.edges() {
            adj[e.tail].push(arcs.len());
            arcs.push(Arc {
                to: e.head,
                cap: e.capacity,
            });
            adj[e.head].push(arcs.len());
            arcs.push(Arc {
                to: e.tail,
                cap: e.capacity,
            });
        }
        Self {
            arcs,
            adj,
            level: vec![0; g.n()],
            next: vec![0; g.n()],
        }
    }

    fn bfs(&mut self, s: usize, t: usize) -> bool {
        self.level.iter_mut().for_each(|l| *l = u32::MAX);
        self.level[s] = 0;
        let mut queue = VecDeque::from([s]);
        while let Some(v) = queue.pop_front() {
            for &a in &self.adj[v] {
                let arc = &self.arcs[a];
                if arc.cap > 0 && self.level[arc.to] == u32::MAX {
                    self.level[arc.to] = self.level[v] + 1;
                    queue.push_back(arc.to);
                }
            }
        }
        self.level[t] != u32::MAX
    }

    fn dfs(&mut self, v: usize, t: usize, limit: u64) -> u64 {
        if v == t {
            return limit;
        }
        while self.next[v] < self.adj[v].len() {
            let a = self.adj[v][self.next[v]];
            let (to, cap) = (self.arcs[a].to, self.arcs[a].cap);
            if cap > 0 && self.level[to] == self.level[v] + 1 {
                let pushed = self.dfs(to, t, limit.min(cap));
                if pushed > 0 {
                    self.arcs[a].cap -= pushed;
                    self.arcs[a ^ 1].cap += pushed;
                    return pushed;
                }
            }
            self.next[v] += 1;
        }
        0
    }

    fn run(&mut self, s: usize, t: usize) -> u64 {
        let mut total = 0u64;
        while self.bfs(s, t) {
            self.next.iter_mut().for_each(|i| *i = 0);
            loop {
                let pushed = self.dfs(s, t, u64::MAX);
                if pushed == 0 {
                    break;
                }
                total += pushed;
            }
        }
        total
    }
}

/// Maximum flow value, an integral maximum flow, and the minimum cut given
/// by the vertices reachable from `s` in the final residual graph.
pub fn exact_maxflow(g: &Graph) -> ExactResult {
    let mut d = Dinic::new(g);
    let value = d.run(g.s(), g.t());
    let flow = g
        .edges()
        .iter()
        .enumerate()
        .map(|(i, e)| {
            // forward residual is u - f, so f = (u - cap_fwd)
            let forward = d.arcs[2 * i].cap;
            e.capacity as f64 - forward as f64
        })
        .collect::<Vec<f64>>();
    d.bfs(g.s(), g.t());
    let side: Vec<bool> = d.level.iter().map(|&l| l != u32::MAX).collect();
    let mincut = Cut::new(g, side).expect("residual side contains s and not t");
    ExactResult {
        flow: FlowVector(flow),
        value,
        mincut,
    }
}

/// Minimum s-t cut capacity by trying all `2^{n-2}` vertex bipartitions.
pub fn enumerate_min_cut(g: &Graph) -> Result<u64> {
    let n = g.n();
    if n > ENUMERATION_LIMIT {
        return Err(Error::TooLarge {
            n,
            limit: ENUMERATION_LIMIT,
        });
    }
    let others: Vec<usize> = (0..n).filter(|&v| v != g.s() && v != g.t()).collect();
    let mut best = u64::MAX;
    let mut side = vec![false; n];
    for mask in 0u32..(1u32 << others.len()) {
        side.iter_mut().for_each(|x| *x = false);
        side[g.s()] = true;
        for (bit, &v) in others.iter().enumerate() {
            side[v] = mask >> bit & 1 == 1;
        }
        let cap: u64 = g
            .edges()
            .iter()
            .filter(|e| side[e.tail] != side[e.head])
            .map(|e| e.capacity)
            .sum();
        best = best.min(cap);
    }
    Ok(best)
}
