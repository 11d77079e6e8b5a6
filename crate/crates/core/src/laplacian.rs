//! Weighted Laplacians and electrical-flow solves.
//!
//! A [`LaplacianSystem`] couples a graph, a set of live edges and their
//! resistances. It solves `L φ = F χ_{s,t}` with `φ_t` grounded to zero,
//! either exactly (dense pivoted elimination, used as a test oracle) or with
//! Jacobi-preconditioned conjugate gradients. Approximate potentials are
//! turned into an exact s-t flow of value `F` by routing the leftover
//! demands through a BFS spanning forest, and the result is certified with a
//! primal-dual energy gap:
//!
//! ```text
//! lower_bound = (F (φ_s - φ_t))² / Σ_e (φ_u - φ_v)² / r_e  ≤  F² Reff  ≤  energy(f)
//! ```
//!
//! The returned potentials are rescaled by the factor that maximises the
//! dual bound, so `energy - lower_bound` simultaneously bounds
//! `‖f - f*‖²_R` and `‖φ - φ*‖²_L`. A gap `g` therefore gives
//! `energy ≤ (1 + g)·optimum`, a per-edge energy error of at most
//! `√g (2 + √g)·optimum` and a potential drop of at least `(1 - √g) F Reff`.

use std::collections::VecDeque;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::graph::{divergence, EdgeId, FlowVector, Graph, PotentialVector, VertexId};

/// Smallest relative residual the conjugate-gradient loop is asked for.
pub const RESIDUAL_FLOOR: f64 = 1e-14;
/// Smallest energy gap that is treated as measurable in double precision.
pub const GAP_FLOOR: f64 = 1e-13;

/// Resistances of the live edges of a graph. Removed edges are simply absent.
#[derive(Debug, Clone, PartialEq)]
pub struct ResistanceVector {
    edges: Vec<EdgeId>,
    values: Vec<f64>,
    ratio: f64,
}

impl ResistanceVector {
    pub fn new(edges: Vec<EdgeId>, values: Vec<f64>) -> Result<Self> {
        if edges.len() != values.len() {
            return Err(Error::DimensionMismatch {
                expected: edges.len(),
                got: values.len(),
            });
        }
        let mut lo = f64::INFINITY;
        let mut hi: f64 = 0.0;
        for (&e, &r) in edges.iter().zip(&values) {
            if !(r > 0.0 && r.is_finite()) {
                return Err(Error::NonPositiveResistance { edge: e, value: r });
            }
            lo = lo.min(r);
            hi = hi.max(r);
        }
        let ratio = if edges.is_empty() { 1.0 } else { hi / lo };
        Ok(Self {
            edges,
            values,
            ratio,
        })
    }

    /// Resistances for every edge `0..values.len()`.
    pub fn all_edges(values: Vec<f64>) -> Result<Self> {
        Self::new((0..values.len()).collect(), values)
    }

    pub fn uniform(g: &Graph, r: f64) -> Result<Self> {
        Self::all_edges(vec![r; g.m()])
    }

    pub fn edges(&self) -> &[EdgeId] {
        &self.edges
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }

    /// `R`: largest over smallest resistance.
    pub fn ratio(&self) -> f64 {
        self.ratio
    }

    /// Dense edge-indexed copy with `f64::INFINITY` on removed edges.
    pub fn to_dense(&self, m: usize) -> Vec<f64> {
        let mut out = vec![f64::INFINITY; m];
        for (&e, &r) in self.edges.iter().zip(&self.values) {
            out[e] = r;
        }
        out
    }
}

/// Topology shared by every system on the same live edge set: incidence of
/// live edges, the component of `s`, and a BFS spanning forest for repair.
#[derive(Debug, Clone)]
pub struct LaplacianPattern {
    n: usize,
    m: usize,
    s: VertexId,
    t: VertexId,
    live: Vec<EdgeId>,
    tails: Vec<VertexId>,
    heads: Vec<VertexId>,
    all_endpoints: Vec<(VertexId, VertexId)>,
    in_component: Vec<bool>,
    connected: bool,
    /// live slots with both endpoints in the component of `s`
    component_slots: Vec<usize>,
    bfs_order: Vec<VertexId>,
    parent: Vec<Option<(VertexId, usize)>>,
}

impl LaplacianPattern {
    /// `live` lists the edge ids taking part in the system, in any order.
    pub fn new(g: &Graph, live: &[EdgeId]) -> Result<Self> {
        let n = g.n();
        let mut seen = vec![false; g.m()];
        for &e in live {
            if e >= g.m() {
                return Err(Error::InvalidParameter(format!("live edge {e} out of range")));
            }
            if std::mem::replace(&mut seen[e], true) {
                return Err(Error::InvalidParameter(format!("live edge {e} listed twice")));
            }
        }
        let tails: Vec<VertexId> = live.iter().map(|&e| g.edge(e).tail).collect();
        let heads: Vec<VertexId> = live.iter().map(|&e| g.edge(e).head).collect();

        let mut adj: Vec<Vec<usize>> = vec![Vec::new(); n];
        for (slot, (&u, &v)) in tails.iter().zip(&heads).enumerate() {
            adj[u].push(slot);
            adj[v].push(slot);
        }

        // BFS forest rooted first at s, then at every unvisited vertex.
        let mut parent = vec![None; n];
        let mut visited = vec![false; n];
        let mut bfs_order = Vec::with_capacity(n);
        let mut in_component = vec![false; n];
        let roots = std::iter::once(g.s()).chain(0..n);
        let mut queue = VecDeque::new();
        for root in roots {
            if visited[root] {
                continue;
            }
            let first_tree = bfs_order.is_empty();
            visited[root] = true;
            queue.push_back(root);
            while let Some(v) = queue.pop_front() {
                bfs_order.push(v);
                if first_tree {
                    in_component[v] = true;
                }
                for &slot in &adj[v] {
                    let w = if tails[slot] == v { heads[slot] } else { tails[slot] };
                    if !visited[w] {
                        visited[w] = true;
                        parent[w] = Some((v, slot));
                        queue.push_back(w);
                    }
                }
            }
        }
        let component_slots = (0..live.len())
            .filter(|&slot| in_component[tails[slot]])
            .collect();
        Ok(Self {
            n,
            m: g.m(),
            s: g.s(),
            t: g.t(),
            live: live.to_vec(),
            tails,
            heads,
            all_endpoints: g.edges().iter().map(|e| (e.tail, e.head)).collect(),
            connected: in_component[g.t()],
            in_component,
            component_slots,
            bfs_order,
            parent,
        })
    }

    pub fn live_edges(&self) -> &[EdgeId] {
        &self.live
    }

    pub fn is_connected(&self) -> bool {
        self.connected
    }

    /// Vertices in the connected component of `s` over live edges.
    pub fn component(&self) -> &[bool] {
        &self.in_component
    }

    /// Adds a tree flow to `raw` so that its divergence becomes exactly
    /// `F χ_{s,t}`. Each component's leftover demand is pushed from the
    /// leaves of the BFS forest towards its root.
    pub fn repair(&self, raw: &[f64], value: f64) -> Result<FlowVector> {
        if raw.len() != self.m {
            return Err(Error::DimensionMismatch {
                expected: self.m,
                got: raw.len(),
            });
        }
        if !self.connected {
            return Err(Error::Disconnected);
        }
        let mut flow = raw.to_vec();
        let mut residual = vec![0.0; self.n];
        residual[self.s] = value;
        residual[self.t] = -value;
        for e in 0..self.m {
            // a raw flow may carry values on edges outside the live set
            let x = raw[e];
            if x != 0.0 {
                residual[self.edge_tail(e)] -= x;
                residual[self.edge_head(e)] += x;
            }
        }
        for &v in self.bfs_order.iter().rev() {
            if let Some((p, slot)) = self.parent[v] {
                let amount = residual[v];
                if amount != 0.0 {
                    let e = self.live[slot];
                    if self.tails[slot] == v {
                        flow[e] += amount;
                    } else {
                        flow[e] -= amount;
                    }
                    residual[p] += amount;
                    residual[v] = 0.0;
                }
            }
        }
        Ok(FlowVector(flow))
    }

    fn edge_tail(&self, e: EdgeId) -> VertexId {
        self.endpoint_lookup(e).0
    }

    fn edge_head(&self, e: EdgeId) -> VertexId {
        self.endpoint_lookup(e).1
    }

    fn endpoint_lookup(&self, e: EdgeId) -> (VertexId, VertexId) {
        self.all_endpoints[e]
    }
}

/// Weighted Laplacian of the live edges with the given resistances.
#[derive(Debug, Clone)]
pub struct LaplacianSystem {
    pattern: Arc<LaplacianPattern>,
    resistances: ResistanceVector,
    conductance: Vec<f64>,
    diag: Vec<f64>,
}

/// Assembles the Laplacian of `g` restricted to the edges of `r`.
pub fn assemble(g: &Graph, r: &ResistanceVector) -> Result<LaplacianSystem> {
    let pattern = Arc::new(LaplacianPattern::new(g, r.edges())?);
    LaplacianSystem::with_pattern(pattern, r.clone())
}

impl LaplacianSystem {
    pub fn with_pattern(pattern: Arc<LaplacianPattern>, r: ResistanceVector) -> Result<Self> {
        if r.edges() != pattern.live_edges() {
            return Err(Error::InvalidParameter(
                "resistances do not cover the live edges of the pattern".into(),
            ));
        }
        let conductance: Vec<f64> = r.values().iter().map(|x| 1.0 / x).collect();
        let mut diag = vec![0.0; pattern.n];
        for (slot, &c) in conductance.iter().enumerate() {
            diag[pattern.tails[slot]] += c;
            diag[pattern.heads[slot]] += c;
        }
        let sys = Self {
            pattern,
            resistances: r,
            conductance,
            diag,
        };
        debug_assert!(sys.check_structure().is_ok());
        Ok(sys)
    }

    pub fn pattern(&self) -> &Arc<LaplacianPattern> {
        &self.pattern
    }

    pub fn resistances(&self) -> &ResistanceVector {
        &self.resistances
    }

    pub fn n(&self) -> usize {
        self.pattern.n
    }

    pub fn source(&self) -> VertexId {
        self.pattern.s
    }

    pub fn sink(&self) -> VertexId {
        self.pattern.t
    }

    pub fn is_connected(&self) -> bool {
        self.pattern.connected
    }

    /// Full `n × n` Laplacian, row-major.
    pub fn dense(&self) -> Vec<Vec<f64>> {
        let n = self.n();
        let mut a = vec![vec![0.0; n]; n];
        for (slot, &c) in self.conductance.iter().enumerate() {
            let (u, v) = (self.pattern.tails[slot], self.pattern.heads[slot]);
            a[u][u] += c;
            a[v][v] += c;
            a[u][v] -= c;
            a[v][u] -= c;
        }
        a
    }

    /// Symmetry, zero row sums and diagonal dominance of the assembled matrix.
    pub fn check_structure(&self) -> Result<()> {
        let a = self.dense();
        let n = self.n();
        for (u, row) in a.iter().enumerate() {
            let scale = self.diag[u].max(f64::MIN_POSITIVE);
            let row_sum: f64 = row.iter().sum();
            if row_sum.abs() > 1e-12 * scale {
                return Err(Error::InvalidParameter(format!("row {u} sums to {row_sum:e}")));
            }
            let off: f64 = (0..n).filter(|&v| v != u).map(|v| row[v].abs()).sum();
            if off > row[u] * (1.0 + 1e-12) + 1e-300 {
                return Err(Error::InvalidParameter(format!("row {u} not diagonally dominant")));
            }
            for v in 0..n {
                if row[v] != a[v][u] {
                    return Err(Error::InvalidParameter(format!("asymmetric at ({u}, {v})")));
                }
            }
        }
        Ok(())
    }

    /// `f = C Bᵀ φ` on live edges, zero elsewhere.
    pub fn potential_flow(&self, phi: &[f64]) -> FlowVector {
        let mut f = vec![0.0; self.pattern.m];
        for (slot, &c) in self.conductance.iter().enumerate() {
            let e = self.pattern.live[slot];
            f[e] = c * (phi[self.pattern.tails[slot]] - phi[self.pattern.heads[slot]]);
        }
        FlowVector(f)
    }

    /// `Σ_e r_e f(e)²` over the live edges.
    pub fn energy(&self, f: &[f64]) -> f64 {
        self.pattern
            .live
            .iter()
            .zip(self.resistances.values())
            .map(|(&e, &r)| r * f[e] * f[e])
            .sum()
    }

    /// `φᵀ L φ = Σ_e (φ_u - φ_v)² / r_e`.
    pub fn potential_energy(&self, phi: &[f64]) -> f64 {
        self.conductance
            .iter()
            .enumerate()
            .map(|(slot, &c)| {
                let d = phi[self.pattern.tails[slot]] - phi[self.pattern.heads[slot]];
                c * d * d
            })
            .sum()
    }

    pub fn repair(&self, raw: &[f64], value: f64) -> Result<FlowVector> {
        self.pattern.repair(raw, value)
    }

    fn grounded_matvec(&self, x: &[f64], y: &mut [f64]) {
        y.iter_mut().for_each(|v| *v = 0.0);
        let p = &self.pattern;
        for &slot in &p.component_slots {
            let (u, v) = (p.tails[slot], p.heads[slot]);
            let d = self.conductance[slot] * (x[u] - x[v]);
            y[u] += d;
            y[v] -= d;
        }
        y[p.t] = 0.0;
    }

    /// Jacobi-preconditioned CG on the grounded system, continuing from `x`.
    /// Returns the number of iterations performed.
    fn pcg(&self, b: &[f64], x: &mut [f64], tol: f64, max_iter: usize) -> usize {
        let n = self.n();
        let p_ = &self.pattern;
        let inv_diag: Vec<f64> = (0..n)
            .map(|v| {
                if v == p_.t || !p_.in_component[v] || self.diag[v] == 0.0 {
                    0.0
                } else {
                    1.0 / self.diag[v]
                }
            })
            .collect();
        let bnorm = dot(b, b).sqrt();
        if bnorm == 0.0 {
            x.iter_mut().for_each(|v| *v = 0.0);
            return 0;
        }
        let mut r = vec![0.0; n];
        self.grounded_matvec(x, &mut r);
        for v in 0..n {
            r[v] = if inv_diag[v] == 0.0 { 0.0 } else { b[v] - r[v] };
        }
        let mut z: Vec<f64> = r.iter().zip(&inv_diag).map(|(a, d)| a * d).collect();
        let mut p = z.clone();
        let mut q = vec![0.0; n];
        let mut rz = dot(&r, &z);
        let goal = tol * bnorm;
        let mut iters = 0;
        while iters < max_iter && dot(&r, &r).sqrt() > goal {
            self.grounded_matvec(&p, &mut q);
            let pq = dot(&p, &q);
            if pq.is_nan() || pq <= 0.0 {
                break;
            }
            let alpha = rz / pq;
            for v in 0..n {
                x[v] += alpha * p[v];
                r[v] -= alpha * q[v];
            }
            for v in 0..n {
                z[v] = r[v] * inv_diag[v];
            }
            let rz_next = dot(&r, &z);
            let beta = rz_next / rz;
            rz = rz_next;
            for v in 0..n {
                p[v] = z[v] + beta * p[v];
            }
            iters += 1;
        }
        iters
    }
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Exact electrical flow of a given value.
#[derive(Debug, Clone, PartialEq)]
pub struct ElectricalSolution {
    pub potentials: PotentialVector,
    pub flow: FlowVector,
    pub energy: f64,
}

/// Dense pivoted elimination on the Laplacian with `t` grounded.
pub fn solve_exact(sys: &LaplacianSystem, value: f64) -> Result<ElectricalSolution> {
    if !sys.is_connected() {
        return Err(Error::Disconnected);
    }
    let p = &sys.pattern;
    let index: Vec<Option<usize>> = {
        let mut next = 0;
        (0..p.n)
            .map(|v| {
                (p.in_component[v] && v != p.t).then(|| {
                    next += 1;
                    next - 1
                })
            })
            .collect()
    };
    let k = index.iter().flatten().count();
    let mut a = vec![vec![0.0; k + 1]; k];
    for &slot in &p.component_slots {
        let (u, v) = (p.tails[slot], p.heads[slot]);
        let c = sys.conductance[slot];
        if let Some(i) = index[u] {
            a[i][i] += c;
        }
        if let Some(j) = index[v] {
            a[j][j] += c;
        }
        if let (Some(i), Some(j)) = (index[u], index[v]) {
            a[i][j] -= c;
            a[j][i] -= c;
        }
    }
    if let Some(i) = index[p.s] {
        a[i][k] = value;
    }
    let x = gaussian_solve(a)?;
    let mut phi = vec![0.0; p.n];
    for v in 0..p.n {
        if let Some(i) = index[v] {
            phi[v] = x[i];
        }
    }
    let flow = sys.potential_flow(&phi);
    let energy = sys.energy(&flow);
    Ok(ElectricalSolution {
        potentials: PotentialVector(phi),
        flow,
        energy,
    })
}

/// Solves an augmented `k × (k+1)` system in place with partial pivoting.
fn gaussian_solve(mut a: Vec<Vec<f64>>) -> Result<Vec<f64>> {
    let k = a.len();
    for col in 0..k {
        let pivot = (col..k)
            .max_by(|&i, &j| a[i][col].abs().total_cmp(&a[j][col].abs()))
            .unwrap();
        if a[pivot][col] == 0.0 {
            return Err(Error::Disconnected);
        }
        a.swap(col, pivot);
        let (upper, lower) = a.split_at_mut(col + 1);
        let prow = &upper[col];
        for row in lower.iter_mut() {
            let factor = row[col] / prow[col];
            if factor != 0.0 {
                for j in col..=k {
                    row[j] -= factor * prow[j];
                }
            }
        }
    }
    let mut x = vec![0.0; k];
    for i in (0..k).rev() {
        let mut acc = a[i][k];
        for j in i + 1..k {
            acc -= a[i][j] * x[j];
        }
        x[i] = acc / a[i][i];
    }
    Ok(x)
}

/// Primal-dual certificate for a flow / potential pair.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Certificate {
    pub energy: f64,
    pub lower_bound: f64,
    /// `energy / lower_bound - 1`; infinite when the potentials are degenerate.
    pub gap: f64,
}

/// Lower-bounds the optimal energy from `potentials` and compares `flow`
/// against it. `flow` must have value exactly `F`.
pub fn certify(
    sys: &LaplacianSystem,
    flow: &[f64],
    potentials: &[f64],
    value: f64,
) -> Certificate {
    let energy = sys.energy(flow);
    let drop = potentials[sys.source()] - potentials[sys.sink()];
    let denom = sys.potential_energy(potentials);
    if drop == 0.0 || denom == 0.0 || !denom.is_finite() {
        return Certificate {
            energy,
            lower_bound: 0.0,
            gap: f64::INFINITY,
        };
    }
    let lower_bound = (value * drop).powi(2) / denom;
    let gap = (energy / lower_bound - 1.0).max(0.0);
    Certificate {
        energy,
        lower_bound,
        gap,
    }
}

/// Approximate electrical flow with an energy certificate.
#[derive(Debug, Clone, PartialEq)]
pub struct CertifiedElectricalFlow {
    /// Exact s-t flow of the requested value, zero on removed edges.
    pub flow: FlowVector,
    /// Potentials scaled to maximise the certificate's lower bound.
    pub potentials: PotentialVector,
    pub energy: f64,
    pub lower_bound: f64,
    /// Certified relative energy gap.
    pub delta_achieved: f64,
    pub solver_iterations: usize,
}

/// Gap thresholds at which the certificate implies each approximation
/// condition for a given `δ`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GapTargets {
    /// total energy within `1 + δ`
    pub energy: f64,
    /// per-edge energy error within `δ / (2 m R)` of the optimum
    pub per_edge: f64,
    /// potential drop at least `(1 - δ/(12 n m R)) F Reff`
    pub potential_drop: f64,
}

impl GapTargets {
    pub fn new(delta: f64, n: usize, m: usize, ratio: f64) -> Self {
        let nm_r = n as f64 * m.max(1) as f64 * ratio;
        let edge = delta / (2.0 * m.max(1) as f64 * ratio);
        let edge_gap = ((1.0 + edge).sqrt() - 1.0).powi(2);
        let drop_gap = (delta / (12.0 * nm_r)).powi(2);
        Self {
            energy: delta,
            per_edge: edge_gap,
            potential_drop: drop_gap,
        }
    }

    pub fn strictest(&self) -> f64 {
        self.energy.min(self.per_edge).min(self.potential_drop)
    }
}

/// Relative accuracy that the linear-solver reduction asks of the solver
/// before rounding: `δ / (12 n⁴ m R^{3/2})`.
pub fn residual_target(delta: f64, n: usize, m: usize, ratio: f64) -> f64 {
    delta / (12.0 * (n as f64).powi(4) * m.max(1) as f64 * ratio.powf(1.5))
}

pub fn solve_approx(sys: &LaplacianSystem, value: f64, delta: f64) -> Result<CertifiedElectricalFlow> {
    solve_approx_from(sys, value, delta, None)
}

/// Certified approximate solve, optionally warm-started from `initial`
/// potentials (only differences to `φ_t` matter).
///
/// The residual tolerance starts at [`residual_target`] and is tightened
/// until the certificate reaches the strictest of the [`GapTargets`]. When
/// that target is below what double precision can certify, the solver runs
/// to [`RESIDUAL_FLOOR`] and accepts any gap within `δ`.
pub fn solve_approx_from(
    sys: &LaplacianSystem,
    value: f64,
    delta: f64,
    initial: Option<&[f64]>,
) -> Result<CertifiedElectricalFlow> {
    if !(delta > 0.0 && delta <= 1.0) {
        return Err(Error::InvalidParameter(format!("delta must lie in (0, 1], got {delta}")));
    }
    if !(value > 0.0 && value.is_finite()) {
        return Err(Error::InvalidParameter(format!("flow value must be positive, got {value}")));
    }
    if !sys.is_connected() {
        return Err(Error::Disconnected);
    }
    let p = &sys.pattern;
    let n = p.n;
    let live_m = p.live.len();
    let ratio = sys.resistances.ratio();
    let target = GapTargets::new(delta, n, live_m, ratio).strictest();
    let certifiable = target >= GAP_FLOOR;

    let mut x = vec![0.0; n];
    if let Some(init) = initial {
        if init.len() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                got: init.len(),
            });
        }
        let base = init[p.t];
        for v in 0..n {
            if p.in_component[v] {
                x[v] = init[v] - base;
            }
        }
    }
    let mut b = vec![0.0; n];
    b[p.s] = value;

    let mut tol = residual_target(delta, n, live_m, ratio).clamp(RESIDUAL_FLOOR, 1e-2);
    let max_iter = 20 * n + 100;
    let mut iterations = 0;
    loop {
        iterations += sys.pcg(&b, &mut x, tol, max_iter);
        let drop = x[p.s] - x[p.t];
        let denom = sys.potential_energy(&x);
        let cert = if drop > 0.0 && denom > 0.0 {
            let alpha = value * drop / denom;
            let scaled: Vec<f64> = x.iter().map(|v| v * alpha).collect();
            let raw = sys.potential_flow(&scaled);
            let flow = sys.repair(&raw, value)?;
            let c = certify(sys, &flow, &scaled, value);
            Some((flow, scaled, c))
        } else {
            None
        };
        let gap = cert.as_ref().map_or(f64::INFINITY, |c| c.2.gap);
        let done = (certifiable && gap <= target) || tol <= RESIDUAL_FLOOR;
        if done {
            return match cert {
                Some((flow, potentials, c)) if c.gap <= delta => Ok(CertifiedElectricalFlow {
                    flow,
                    potentials: PotentialVector(potentials),
                    energy: c.energy,
                    lower_bound: c.lower_bound,
                    delta_achieved: c.gap,
                    solver_iterations: iterations,
                }),
                _ => Err(Error::NonConvergence {
                    gap,
                    target: delta,
                    iterations,
                }),
            };
        }
        tol = (tol * 1e-3).max(RESIDUAL_FLOOR);
    }
}

/// Routes `F χ_{s,t} - Bᵀ raw` through a BFS spanning tree of all edges of
/// `g` and adds it to `raw`.
pub fn repair_flow(g: &Graph, raw: &[f64], value: f64) -> Result<FlowVector> {
    let live: Vec<EdgeId> = (0..g.m()).collect();
    LaplacianPattern::new(g, &live)?.repair(raw, value)
}

/// Largest per-vertex deviation of `Bᵀ f` from `F χ_{s,t}`.
pub fn demand_error(g: &Graph, f: &[f64], value: f64) -> Result<f64> {
    let div = divergence(g, f)?;
    Ok(div
        .iter()
        .enumerate()
        .map(|(v, &d)| {
            let want = if v == g.s() {
                value
            } else if v == g.t() {
                -value
            } else {
                0.0
            };
            (d - want).abs()
        })
        .fold(0.0, f64::max))
}
