//! Undirected capacitated graphs with a distinguished source and sink, plus
//! the flow, cut and congestion primitives every algorithm in the crate uses.
//!
//! Each edge carries a fixed orientation `tail -> head`. A positive entry of a
//! [`FlowVector`] means flow travelling from tail to head, a negative entry
//! means the opposite direction. The orientation carries no other meaning.

use std::ops::{Deref, DerefMut};

use crate::error::{Error, Result};

pub type VertexId = usize;
pub type EdgeId = usize;

/// Relative tolerance used by [`flow_value`] for conservation checks.
pub const CONSERVATION_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Edge {
    pub tail: VertexId,
    pub head: VertexId,
    pub capacity: u64,
}

impl Edge {
    /// The endpoint of the edge that is not `v`.
    pub fn other(&self, v: VertexId) -> VertexId {
        if self.tail == v {
            self.head
        } else {
            self.tail
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Graph {
    n: usize,
    edges: Vec<Edge>,
    s: VertexId,
    t: VertexId,
    capacity_ratio: f64,
}

impl Graph {
    /// Builds a graph on vertices `0..n` from `(tail, head, capacity)` triples.
    ///
    /// Parallel edges are kept as distinct edges. Self-loops, zero capacities,
    /// out-of-range endpoints and `s == t` are rejected.
    pub fn new(
        n: usize,
        edges: impl IntoIterator<Item = (VertexId, VertexId, u64)>,
        s: VertexId,
        t: VertexId,
    ) -> Result<Self> {
        if s >= n || t >= n {
            return Err(Error::InvalidGraph(format!(
                "terminals ({s}, {t}) out of range for {n} vertices"
            )));
        }
        if s == t {
            return Err(Error::InvalidGraph("source equals sink".into()));
        }
        let mut list = Vec::new();
        for (i, (tail, head, capacity)) in edges.into_iter().enumerate() {
            if tail >= n || head >= n {
                return Err(Error::InvalidGraph(format!(
                    "edge {i} ({tail}, {head}) has an endpoint out of range"
                )));
            }
            if tail == head {
                return Err(Error::InvalidGraph(format!("edge {i} is a self-loop")));
            }
            if capacity == 0 {
                return Err(Error::InvalidGraph(format!("edge {i} has zero capacity")));
            }
            list.push(Edge {
                tail,
                head,
                capacity,
            });
        }
        let capacity_ratio = match (
            list.iter().map(|e| e.capacity).max(),
            list.iter().map(|e| e.capacity).min(),
        ) {
            (Some(hi), Some(lo)) => hi as f64 / lo as f64,
            _ => 1.0,
        };
        Ok(Self {
            n,
            edges: list,
            s,
            t,
            capacity_ratio,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        self.edges.len()
    }

    pub fn s(&self) -> VertexId {
        self.s
    }

    pub fn t(&self) -> VertexId {
        self.t
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn edge(&self, e: EdgeId) -> &Edge {
        &self.edges[e]
    }

    pub fn capacity(&self, e: EdgeId) -> f64 {
        self.edges[e].capacity as f64
    }

    /// Ratio of the largest to the smallest capacity (`U`).
    pub fn capacity_ratio(&self) -> f64 {
        self.capacity_ratio
    }

    /// Incidence lists: for every vertex, the ids of the edges touching it.
    pub fn incidence(&self) -> Vec<Vec<EdgeId>> {
        let mut adj = vec![Vec::new(); self.n];
        for (id, e) in self.edges.iter().enumerate() {
            adj[e.tail].push(id);
            adj[e.head].push(id);
        }
        adj
    }

    /// Vertices reachable from `s` using only edges with `live[e] == true`.
    pub fn reachable_from_source(&self, live: Option<&[bool]>) -> Vec<bool> {
        let adj = self.incidence();
        let mut seen = vec![false; self.n];
        let mut stack = vec![self.s];
        seen[self.s] = true;
        while let Some(v) = stack.pop() {
            for &id in &adj[v] {
                if live.is_some_and(|l| !l[id]) {
                    continue;
                }
                let w = self.edges[id].other(v);
                if !seen[w] {
                    seen[w] = true;
                    stack.push(w);
                }
            }
        }
        seen
    }

    pub fn is_st_connected(&self) -> bool {
        self.reachable_from_source(None)[self.t]
    }
}

macro_rules! real_vector {
    ($(#[$meta:meta])* $name:ident) => {
        $(#[$meta])*
        #[derive(Debug, Clone, PartialEq, Default)]
        pub struct $name(pub Vec<f64>);

        impl $name {
            pub fn zeros(len: usize) -> Self {
                Self(vec![0.0; len])
            }

            pub fn into_inner(self) -> Vec<f64> {
                self.0
            }
        }

        impl Deref for $name {
            type Target = [f64];
            fn deref(&self) -> &[f64] {
                &self.0
            }
        }

        impl DerefMut for $name {
            fn deref_mut(&mut self) -> &mut [f64] {
                &mut self.0
            }
        }

        impl From<Vec<f64>> for $name {
            fn from(v: Vec<f64>) -> Self {
                Self(v)
            }
        }
    };
}

real_vector!(
    /// Edge-indexed signed flow, positive in the direction `tail -> head`.
    FlowVector
);
real_vector!(
    /// Vertex-indexed net outflow (`Bᵀf`): flow leaving minus flow entering.
    DivergenceVector
);
real_vector!(
    /// Vertex potentials. Only differences carry meaning.
    PotentialVector
);

impl FlowVector {
    pub fn scaled(&self, factor: f64) -> FlowVector {
        FlowVector(self.0.iter().map(|x| x * factor).collect())
    }

    pub fn add_assign(&mut self, other: &FlowVector) {
        for (a, b) in self.0.iter_mut().zip(other.iter()) {
            *a += b;
        }
    }
}

/// An s-t cut given by its source side, together with its capacity.
#[derive(Debug, Clone, PartialEq)]
pub struct Cut {
    pub side_s: Vec<bool>,
    pub capacity: f64,
}

impl Cut {
    pub fn new(g: &Graph, side_s: Vec<bool>) -> Result<Self> {
        let capacity = cut_capacity(g, &side_s)?;
        Ok(Self { side_s, capacity })
    }

    pub fn source_side(&self) -> impl Iterator<Item = VertexId> + '_ {
        self.side_s
            .iter()
            .enumerate()
            .filter_map(|(v, &inside)| inside.then_some(v))
    }

    pub fn source_side_len(&self) -> usize {
        self.side_s.iter().filter(|&&x| x).count()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Congestion {
    pub per_edge: Vec<f64>,
    pub max: f64,
}

fn check_len(expected: usize, got: usize) -> Result<()> {
    if expected != got {
        return Err(Error::DimensionMismatch { expected, got });
    }
    Ok(())
}

/// `Bᵀf`: for each vertex, flow leaving along its edges minus flow entering.
pub fn divergence(g: &Graph, f: &[f64]) -> Result<DivergenceVector> {
    check_len(g.m(), f.len())?;
    let mut div = vec![0.0; g.n()];
    for (e, &x) in g.edges().iter().zip(f) {
        div[e.tail] += x;
        div[e.head] -= x;
    }
    Ok(DivergenceVector(div))
}

/// Net flow out of the source, after checking conservation at every other
/// vertex with the default relative tolerance.
pub fn flow_value(g: &Graph, f: &[f64]) -> Result<f64> {
    flow_value_with_tolerance(g, f, CONSERVATION_TOLERANCE)
}

/// Like [`flow_value`] with a caller-chosen relative tolerance. The allowed
/// violation per vertex is `rel_tol * max(|f|, max_e |f(e)|)`.
pub fn flow_value_with_tolerance(g: &Graph, f: &[f64], rel_tol: f64) -> Result<f64> {
    let div = divergence(g, f)?;
    let value = div[g.s()];
    let scale = f.iter().fold(value.abs(), |acc, x| acc.max(x.abs()));
    let allowed = rel_tol * scale;
    let mut worst: Option<(usize, f64)> = None;
    for (v, &d) in div.iter().enumerate() {
        if v == g.s() || v == g.t() {
            continue;
        }
        if d.abs() > allowed && worst.is_none_or(|(_, w)| d.abs() > w) {
            worst = Some((v, d.abs()));
        }
    }
    if let Some((vertex, violation)) = worst {
        return Err(Error::ConservationViolated { vertex, violation });
    }
    Ok(value)
}

/// Per-edge `|f(e)| / u_e` and its maximum.
pub fn congestion(g: &Graph, f: &[f64]) -> Congestion {
    let per_edge: Vec<f64> = g
        .edges()
        .iter()
        .zip(f)
        .map(|(e, x)| x.abs() / e.capacity as f64)
        .collect();
    let max = per_edge.iter().copied().fold(0.0, f64::max);
    Congestion { per_edge, max }
}

pub fn max_congestion(g: &Graph, f: &[f64]) -> f64 {
    g.edges()
        .iter()
        .zip(f)
        .map(|(e, x)| x.abs() / e.capacity as f64)
        .fold(0.0, f64::max)
}

/// Total capacity of edges with exactly one endpoint in `side_s`.
pub fn cut_capacity(g: &Graph, side_s: &[bool]) -> Result<f64> {
    check_len(g.n(), side_s.len())?;
    if !side_s[g.s()] {
        return Err(Error::InvalidCut("source not on the source side".into()));
    }
    if side_s[g.t()] {
        return Err(Error::InvalidCut("sink on the source side".into()));
    }
    Ok(g.edges()
        .iter()
        .filter(|e| side_s[e.tail] != side_s[e.head])
        .map(|e| e.capacity as f64)
        .sum())
}

/// Signed flow leaving `side_s` across the cut.
pub fn net_flow_across(g: &Graph, f: &[f64], side_s: &[bool]) -> f64 {
    g.edges()
        .iter()
        .zip(f)
        .map(|(e, &x)| match (side_s[e.tail], side_s[e.head]) {
            (true, false) => x,
            (false, true) => -x,
            _ => 0.0,
        })
        .sum()
}
