//! Multiplicative-weights approximate maximum flow with an electrical-flow
//! oracle, capacity preprocessing, and the binary search over the flow value.

use std::cmp::Reverse;
use std::collections::BinaryHeap;
use std::sync::Arc;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::{congestion, flow_value_with_tolerance, EdgeId, FlowVector, Graph};
use crate::improved::{improved_maxflow, ImprovedParams};
use crate::instrument::InstrumentLog;
use crate::laplacian::{solve_approx_from, LaplacianPattern, LaplacianSystem, ResistanceVector};

/// Relative slack on the runtime checks of the oracle and weight invariants.
pub const CHECK_SLACK: f64 = 1e-6;
/// Relative slack on the weight-growth lemmas.
pub const WEIGHT_SLACK: f64 = 1e-9;

/// Edge weights of the multiplicative-weights routine.
#[derive(Debug, Clone, PartialEq)]
pub struct WeightVector {
    w: Vec<f64>,
    total: f64,
}

impl WeightVector {
    pub fn ones(m: usize) -> Self {
        Self {
            w: vec![1.0; m],
            total: m as f64,
        }
    }

    pub fn from_values(w: Vec<f64>) -> Result<Self> {
        if let Some(e) = w.iter().position(|&x| !(x >= 1.0 && x.is_finite())) {
            return Err(Error::InvalidParameter(format!("weight of edge {e} is below 1")));
        }
        let total = w.iter().sum();
        Ok(Self { w, total })
    }

    pub fn values(&self) -> &[f64] {
        &self.w
    }

    pub fn get(&self, e: EdgeId) -> f64 {
        self.w[e]
    }

    pub fn len(&self) -> usize {
        self.w.len()
    }

    pub fn is_empty(&self) -> bool {
        self.w.is_empty()
    }

    /// `|w|₁`.
    pub fn total(&self) -> f64 {
        self.total
    }

    /// `w_e ← w_e (1 + (ε/ρ) cong(e))`.
    pub fn multiply_by_congestion(&mut self, cong: &[f64], eps: f64, rho: f64) {
        for (w, &c) in self.w.iter_mut().zip(cong) {
            *w *= 1.0 + eps / rho * c;
        }
        self.total = self.w.iter().sum();
    }

    /// `w_e ← w_e + (ε/ρ) cong(e) w_e + ε² μ / (m ρ)`.
    pub fn additive_multiplicative(&mut self, cong: &[f64], eps: f64, rho: f64) {
        let m = self.w.len() as f64;
        let floor = eps * eps * self.total / (m * rho);
        for (w, &c) in self.w.iter_mut().zip(cong) {
            *w += eps / rho * c * *w + floor;
        }
        self.total = self.w.iter().sum();
    }
}

/// Multiplicative update of `w` by the congestion of `f`.
pub fn update_weights(w: &WeightVector, f: &[f64], g: &Graph, eps: f64, rho: f64) -> Result<WeightVector> {
    if rho.is_nan() || rho <= 0.0 {
        return Err(Error::InvalidParameter(format!("rho must be positive, got {rho}")));
    }
    if f.len() != g.m() || w.len() != g.m() {
        return Err(Error::DimensionMismatch {
            expected: g.m(),
            got: f.len().min(w.len()),
        });
    }
    let mut out = w.clone();
    out.multiply_by_congestion(&congestion(g, f).per_edge, eps, rho);
    Ok(out)
}

/// `r_e = (w_e + ε|w|₁/(3m)) / u_e²` for the edges in `live`, with `|w|₁`
/// and `m` taken over all edges of `g`.
pub fn oracle_resistances(
    g: &Graph,
    w: &WeightVector,
    eps: f64,
    live: &[EdgeId],
) -> Result<ResistanceVector> {
    let shift = eps * w.total() / (3.0 * g.m() as f64);
    let values = live
        .iter()
        .map(|&e| {
            let u = g.capacity(e);
            (w.get(e) + shift) / (u * u)
        })
        .collect();
    ResistanceVector::new(live.to_vec(), values)
}

#[derive(Debug, Clone, PartialEq)]
pub struct OracleFlow {
    pub flow: FlowVector,
    pub energy: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub enum OracleFailure {
    EnergyExceeded { energy: f64, budget: f64 },
    Disconnected,
}

#[derive(Debug, Clone, PartialEq)]
pub enum OracleOutcome {
    Success(OracleFlow),
    Fail(OracleFailure),
}

impl OracleOutcome {
    pub fn is_fail(&self) -> bool {
        matches!(self, OracleOutcome::Fail(_))
    }

    pub fn flow(&self) -> Option<&FlowVector> {
        match self {
            OracleOutcome::Success(f) => Some(&f.flow),
            OracleOutcome::Fail(_) => None,
        }
    }
}

/// An oracle answering weighted flow queries for a fixed graph.
pub trait FlowOracle {
    /// Width bound on the congestion of returned flows.
    fn rho(&self) -> f64;

    fn query(
        &mut self,
        w: &WeightVector,
        value: f64,
        iteration: usize,
        log: &mut InstrumentLog,
    ) -> Result<OracleOutcome>;

    fn linear_solves(&self) -> usize;

    fn forbidden(&self) -> (usize, f64) {
        (0, 0.0)
    }

    fn last_phi(&self) -> Option<f64> {
        None
    }
}

pub fn check_eps(eps: f64, upper: f64) -> Result<()> {
    if !(eps > 0.0 && eps < upper) {
        return Err(Error::InvalidParameter(format!(
            "epsilon must lie in (0, {upper}), got {eps}"
        )));
    }
    Ok(())
}

/// `ln m` with `m` clamped to at least 2.
pub fn ln_m(m: usize) -> f64 {
    (m.max(2) as f64).ln()
}

/// `⌈2ρ ln m / ε²⌉`, at least one.
pub fn iteration_count(rho: f64, eps: f64, m: usize) -> usize {
    ((2.0 * rho * ln_m(m) / (eps * eps)).ceil() as usize).max(1)
}

pub fn simple_rho(m: usize, eps: f64) -> f64 {
    3.0 * (m as f64 / eps).sqrt()
}

/// The electrical-flow oracle with width `3√(m/ε)`.
pub struct SimpleOracle<'g> {
    g: &'g Graph,
    eps: f64,
    rho: f64,
    pattern: Arc<LaplacianPattern>,
    live: Vec<EdgeId>,
    ratio_bound: f64,
    warm: Option<Vec<f64>>,
    solves: usize,
}

impl<'g> SimpleOracle<'g> {
    pub fn new(g: &'g Graph, eps: f64) -> Result<Self> {
        check_eps(eps, 0.5)?;
        let live: Vec<EdgeId> = (0..g.m()).collect();
        let pattern = Arc::new(LaplacianPattern::new(g, &live)?);
        let u = g.capacity_ratio();
        Ok(Self {
            g,
            eps,
            rho: simple_rho(g.m(), eps),
            pattern,
            live,
            ratio_bound: u * u * (3.0 * g.m() as f64 + eps) / eps,
            warm: None,
            solves: 0,
        })
    }
}

impl FlowOracle for SimpleOracle<'_> {
    fn rho(&self) -> f64 {
        self.rho
    }

    fn query(
        &mut self,
        w: &WeightVector,
        value: f64,
        iteration: usize,
        log: &mut InstrumentLog,
    ) -> Result<OracleOutcome> {
        if !self.pattern.is_connected() {
            return Ok(OracleOutcome::Fail(OracleFailure::Disconnected));
        }
        let r = oracle_resistances(self.g, w, self.eps, &self.live)?;
        let ratio = r.ratio();
        log.check(
            ratio <= self.ratio_bound * (1.0 + WEIGHT_SLACK),
            iteration,
            "resistance_ratio",
            || format!("R = {ratio:e} exceeds {:e}", self.ratio_bound),
        );
        let sys = LaplacianSystem::with_pattern(self.pattern.clone(), r)?;
        let sol = solve_approx_from(&sys, value, self.eps / 3.0, self.warm.as_deref())?;
        self.solves += 1;
        let budget = (1.0 + self.eps) * w.total();
        let energy = sol.energy;
        self.warm = Some(sol.potentials.into_inner());
        if energy > budget {
            return Ok(OracleOutcome::Fail(OracleFailure::EnergyExceeded { energy, budget }));
        }
        Ok(OracleOutcome::Success(OracleFlow {
            flow: sol.flow,
            energy,
        }))
    }

    fn linear_solves(&self) -> usize {
        self.solves
    }
}

/// One query of the simple oracle.
pub fn simple_oracle(g: &Graph, w: &WeightVector, value: f64, eps: f64) -> Result<OracleOutcome> {
    let mut oracle = SimpleOracle::new(g, eps)?;
    oracle.query(w, value, 0, &mut InstrumentLog::new(false))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct IterationRecord {
    pub iteration: usize,
    pub mu: f64,
    pub energy: f64,
    pub max_congestion: f64,
    pub forbidden: usize,
    pub forbidden_capacity: f64,
    pub phi: Option<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub enum MwOutcome {
    /// Averaged, scaled-down flow and its value.
    Feasible { flow: FlowVector, value: f64 },
    Fail { iteration: usize, reason: OracleFailure },
}

impl MwOutcome {
    pub fn is_fail(&self) -> bool {
        matches!(self, MwOutcome::Fail { .. })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct MwRun {
    pub outcome: MwOutcome,
    pub rho: f64,
    pub planned_iterations: usize,
    pub iterations: usize,
    pub oracle_calls: usize,
    pub linear_solves: usize,
    pub log: InstrumentLog,
    pub history: Vec<IterationRecord>,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MwConfig {
    pub eps: f64,
    pub instrument: bool,
    pub record_history: bool,
}

impl MwConfig {
    pub fn new(eps: f64) -> Self {
        Self {
            eps,
            instrument: false,
            record_history: false,
        }
    }
}

/// The multiplicative-weights routine: `N = ⌈2ρ ln m / ε²⌉` oracle calls,
/// then the average flow scaled by `(1-ε)²/(1+ε)`.
pub fn mw_maxflow(
    g: &Graph,
    value: f64,
    config: &MwConfig,
    oracle: &mut dyn FlowOracle,
) -> Result<MwRun> {
    let eps = config.eps;
    check_eps(eps, 0.5)?;
    if !(value > 0.0 && value.is_finite()) {
        return Err(Error::InvalidParameter(format!("flow value must be positive, got {value}")));
    }
    let m = g.m();
    let rho = oracle.rho();
    let n_iter = iteration_count(rho, eps, m);
    let mut log = InstrumentLog::new(config.instrument);
    let mut w = WeightVector::ones(m);
    let mut sum = FlowVector::zeros(m);
    let mut cumulative = vec![0.0; m];
    let mut history = Vec::new();
    let growth = ((1.0 + eps) * eps / rho).exp();
    let floor_rate = (1.0 - eps) * eps / rho;

    for i in 0..n_iter {
        let outcome = oracle.query(&w, value, i, &mut log)?;
        let OracleOutcome::Success(of) = outcome else {
            let OracleOutcome::Fail(reason) = outcome else { unreachable!() };
            return Ok(MwRun {
                outcome: MwOutcome::Fail { iteration: i, reason },
                rho,
                planned_iterations: n_iter,
                iterations: i,
                oracle_calls: i + 1,
                linear_solves: oracle.linear_solves(),
                log,
                history,
            });
        };
        let cong = congestion(g, &of.flow);
        if log.enabled {
            check_oracle_flow(g, &of.flow, &cong.per_edge, &w, value, eps, rho, i, &mut log);
        }
        let mu = w.total();
        w.multiply_by_congestion(&cong.per_edge, eps, rho);
        if log.enabled {
            let mu_next = w.total();
            log.check(mu_next <= mu * growth * (1.0 + WEIGHT_SLACK), i, "weight_growth", || {
                format!("mu {mu:e} -> {mu_next:e}, factor limit {growth}")
            });
            for (e, &c) in cong.per_edge.iter().enumerate() {
                cumulative[e] += c;
                let lower = floor_rate * cumulative[e];
                let have = w.get(e).ln();
                log.check(
                    have >= lower - WEIGHT_SLACK * lower.max(1.0),
                    i,
                    "weight_floor",
                    || format!("edge {e}: ln w = {have} below {lower}"),
                );
            }
        }
        if config.record_history {
            let (forbidden, forbidden_capacity) = oracle.forbidden();
            history.push(IterationRecord {
                iteration: i,
                mu,
                energy: of.energy,
                max_congestion: cong.max,
                forbidden,
                forbidden_capacity,
                phi: oracle.last_phi(),
            });
        }
        sum.add_assign(&of.flow);
    }

    let scale = (1.0 - eps).powi(2) / ((1.0 + eps) * n_iter as f64);
    let flow = sum.scaled(scale);
    Ok(MwRun {
        outcome: MwOutcome::Feasible {
            flow,
            value: (1.0 - eps).powi(2) / (1.0 + eps) * value,
        },
        rho,
        planned_iterations: n_iter,
        iterations: n_iter,
        oracle_calls: n_iter,
        linear_solves: oracle.linear_solves(),
        log,
        history,
    })
}

/// Checks the three oracle conditions on a returned flow.
#[allow(clippy::too_many_arguments)]
fn check_oracle_flow(
    g: &Graph,
    flow: &[f64],
    cong: &[f64],
    w: &WeightVector,
    value: f64,
    eps: f64,
    rho: f64,
    iteration: usize,
    log: &mut InstrumentLog,
) {
    let got = flow_value_with_tolerance(g, flow, 1e-9);
    log.check(
        matches!(got, Ok(v) if (v - value).abs() <= 1e-9 * value),
        iteration,
        "oracle_value",
        || format!("value {got:?}, wanted {value}"),
    );
    let weighted: f64 = cong.iter().zip(w.values()).map(|(c, w)| c * w).sum();
    let limit = (1.0 + eps) * w.total();
    log.check(weighted <= limit * (1.0 + CHECK_SLACK), iteration, "oracle_weighted_congestion", || {
        format!("Σ w cong = {weighted:e} above {limit:e}")
    });
    let max = cong.iter().copied().fold(0.0, f64::max);
    log.check(max <= rho * (1.0 + CHECK_SLACK), iteration, "oracle_width", || {
        format!("max congestion {max} above rho {rho}")
    });
}

/// Largest bottleneck capacity over s-t paths (widest-path search).
pub fn max_bottleneck_path(g: &Graph) -> Result<u64> {
    let inc = g.incidence();
    let mut best = vec![0u64; g.n()];
    let mut done = vec![false; g.n()];
    let mut heap = BinaryHeap::new();
    best[g.s()] = u64::MAX;
    heap.push((best[g.s()], Reverse(g.s())));
    while let Some((width, Reverse(v))) = heap.pop() {
        if done[v] {
            continue;
        }
        done[v] = true;
        if v == g.t() {
            return Ok(width);
        }
        for &e in &inc[v] {
            let edge = g.edge(e);
            let w = edge.other(v);
            let cand = width.min(edge.capacity);
            if !done[w] && cand > best[w] {
                best[w] = cand;
                heap.push((cand, Reverse(w)));
            }
        }
    }
    Err(Error::Disconnected)
}

/// How a normalized graph relates to the original one.
#[derive(Debug, Clone, PartialEq)]
pub struct ScaleInfo {
    /// Original id of every normalized edge.
    pub edge_map: Vec<EdgeId>,
    pub original_m: usize,
    pub bottleneck: u64,
    pub clipped: usize,
    pub removed: usize,
}

impl ScaleInfo {
    pub fn is_identity(&self) -> bool {
        self.removed == 0 && self.clipped == 0
    }

    /// Maps a flow on the normalized graph back to the original edges.
    pub fn map_flow(&self, f: &[f64]) -> FlowVector {
        let mut out = vec![0.0; self.original_m];
        for (&e, &x) in self.edge_map.iter().zip(f) {
            out[e] = x;
        }
        FlowVector(out)
    }
}

/// Clips capacities above `mB` and drops those below `εB/(2m)`. Any cut
/// loses at most `m · εB/(2m) = εB/2`, and the surviving capacities lie
/// within a factor `2m²/ε` of each other.
pub fn normalize_capacities(g: &Graph, eps: f64) -> Result<(Graph, ScaleInfo)> {
    if !(eps > 0.0 && eps <= 1.0) {
        return Err(Error::InvalidParameter(format!("epsilon must lie in (0, 1], got {eps}")));
    }
    let b = max_bottleneck_path(g)?;
    let m = g.m();
    let clip = (m as u128 * b as u128).min(u64::MAX as u128) as u64;
    let floor = eps * b as f64 / (2.0 * m as f64);
    let mut kept = Vec::new();
    let mut edges = Vec::new();
    let mut clipped = 0;
    for (e, edge) in g.edges().iter().enumerate() {
        if (edge.capacity as f64) < floor {
            continue;
        }
        let cap = if edge.capacity > clip {
            clipped += 1;
            clip
        } else {
            edge.capacity
        };
        kept.push(e);
        edges.push((edge.tail, edge.head, cap));
    }
    let removed = m - kept.len();
    let h = Graph::new(g.n(), edges, g.s(), g.t())?;
    Ok((
        h,
        ScaleInfo {
            edge_map: kept,
            original_m: m,
            bottleneck: b,
            clipped,
            removed,
        },
    ))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum FlowAlgorithm {
    Simple,
    Improved(ImprovedParams),
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FlowConfig {
    pub eps: f64,
    pub algorithm: FlowAlgorithm,
    pub instrument: bool,
    pub record_history: bool,
    /// Record exact effective resistances after each solve (improved only).
    pub phi_trace: bool,
}

impl FlowConfig {
    pub fn simple(eps: f64) -> Self {
        Self {
            eps,
            algorithm: FlowAlgorithm::Simple,
            instrument: false,
            record_history: false,
            phi_trace: false,
        }
    }

    pub fn improved(eps: f64) -> Self {
        Self {
            algorithm: FlowAlgorithm::Improved(ImprovedParams::default()),
            ..Self::simple(eps)
        }
    }

    pub fn mw(&self) -> MwConfig {
        MwConfig {
            eps: self.eps,
            instrument: self.instrument,
            record_history: self.record_history,
        }
    }
}

/// A run of the chosen algorithm at a fixed flow value.
#[derive(Debug, Clone, PartialEq)]
pub struct FlowRun {
    pub mw: MwRun,
    pub improved: Option<crate::improved::ImprovedExtras>,
}

pub fn run_flow_algorithm(g: &Graph, value: f64, config: &FlowConfig) -> Result<FlowRun> {
    match config.algorithm {
        FlowAlgorithm::Simple => {
            let mut oracle = SimpleOracle::new(g, config.eps)?;
            let mw = mw_maxflow(g, value, &config.mw(), &mut oracle)?;
            Ok(FlowRun { mw, improved: None })
        }
        FlowAlgorithm::Improved(params) => {
            let (mw, extras) = improved_maxflow(g, value, config, &params)?;
            Ok(FlowRun {
                mw,
                improved: Some(extras),
            })
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ProbeRecord {
    pub index: usize,
    pub value: f64,
    pub succeeded: bool,
    pub iterations: usize,
    pub linear_solves: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SearchOutcome {
    /// Feasible flow on the original graph.
    pub flow: FlowVector,
    /// Value of `flow`.
    pub value: f64,
    /// Target value of the succeeding probe.
    pub target: f64,
    pub scale: ScaleInfo,
    pub probes: Vec<ProbeRecord>,
    pub iterations: usize,
    pub oracle_calls: usize,
    pub linear_solves: usize,
    pub log: InstrumentLog,
    pub history: Vec<IterationRecord>,
    /// Extras of the succeeding improved run.
    pub improved: Option<crate::improved::ImprovedExtras>,
}

/// Geometric grid `B (1+ε/8)^k`, capped at `mB`, covering `[B, mB]`.
pub fn search_grid(b: f64, m: usize, eps: f64) -> Vec<f64> {
    let step = 1.0 + eps / 8.0;
    let top = b * m.max(1) as f64;
    let k_max = if m <= 1 {
        0
    } else {
        ((m as f64).ln() / step.ln()).ceil() as usize
    };
    (0..=k_max).map(|k| (b * step.powi(k as i32)).min(top)).collect()
}

/// Binary search over the grid for the largest value at which the
/// algorithm succeeds. The returned flow has value at least
/// `(1-ε/2)(1-ε)²/((1+ε)(1+ε/8)) F* ≥ (1-5ε) F*`.
pub fn binary_search_maxflow(g: &Graph, config: &FlowConfig) -> Result<SearchOutcome> {
    check_eps(config.eps, 0.5)?;
    let (h, scale) = normalize_capacities(g, config.eps)?;
    let b = max_bottleneck_path(&h)? as f64;
    let grid = search_grid(b, h.m(), config.eps);

    let mut probes = Vec::new();
    let mut log = InstrumentLog::new(config.instrument);
    let (mut iterations, mut oracle_calls, mut linear_solves) = (0, 0, 0);
    let mut best: Option<(usize, FlowRun)> = None;
    let mut probe = |k: usize, log: &mut InstrumentLog| -> Result<FlowRun> {
        let run = run_flow_algorithm(&h, grid[k], config)?;
        iterations += run.mw.iterations;
        oracle_calls += run.mw.oracle_calls;
        linear_solves += run.mw.linear_solves;
        log.absorb(run.mw.log.clone());
        probes.push(ProbeRecord {
            index: k,
            value: grid[k],
            succeeded: !run.mw.outcome.is_fail(),
            iterations: run.mw.iterations,
            linear_solves: run.mw.linear_solves,
        });
        Ok(run)
    };

    let (mut lo, mut hi) = (0usize, grid.len());
    while hi - lo > 1 {
        let mid = lo + (hi - lo) / 2;
        let run = probe(mid, &mut log)?;
        if run.mw.outcome.is_fail() {
            hi = mid;
        } else {
            lo = mid;
            best = Some((mid, run));
        }
    }
    let (k, run) = match best {
        Some(b) => b,
        None => {
            let run = probe(0, &mut log)?;
            if run.mw.outcome.is_fail() {
                return Err(Error::AlgorithmFailed(format!(
                    "failed at the bottleneck value {}",
                    grid[0]
                )));
            }
            (0, run)
        }
    };
    let MwOutcome::Feasible { flow, value } = &run.mw.outcome else {
        unreachable!()
    };
    Ok(SearchOutcome {
        flow: scale.map_flow(flow),
        value: *value,
        target: grid[k],
        scale,
        probes,
        iterations,
        oracle_calls,
        linear_solves,
        log,
        history: run.mw.history.clone(),
        improved: run.improved.clone(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::max_congestion;

    fn single(cap: u64) -> Graph {
        Graph::new(2, [(0, 1, cap)], 0, 1).unwrap()
    }

    fn diamond() -> Graph {
        Graph::new(4, [(0, 1, 1), (0, 2, 2), (1, 3, 2), (2, 3, 1)], 0, 3).unwrap()
    }

    #[test]
    fn oracle_single_edge_success() {
        let g = single(1);
        let out = simple_oracle(&g, &WeightVector::ones(1), 1.0, 0.25).unwrap();
        let OracleOutcome::Success(f) = out else { panic!("{out:?}") };
        assert!((f.flow[0] - 1.0).abs() < 1e-12);
        assert!((f.energy - (1.0 + 0.25 / 3.0)).abs() < 1e-12);
    }

    #[test]
    fn oracle_single_edge_overload_fails() {
        let g = single(1);
        let out = simple_oracle(&g, &WeightVector::ones(1), 3.0, 0.25).unwrap();
        assert!(matches!(out, OracleOutcome::Fail(OracleFailure::EnergyExceeded { .. })));
    }

    #[test]
    fn oracle_rejects_eps() {
        let g = single(1);
        assert!(simple_oracle(&g, &WeightVector::ones(1), 1.0, 0.5).is_err());
    }

    #[test]
    fn weight_update_examples() {
        let g = single(1);
        let w = WeightVector::ones(1);
        assert!((update_weights(&w, &[5.0], &g, 0.1, 10.0).unwrap().get(0) - 1.05).abs() < 1e-15);
        assert_eq!(update_weights(&w, &[0.0], &g, 0.1, 10.0).unwrap().get(0), 1.0);
        let at_rho = update_weights(&w, &[10.0], &g, 0.1, 10.0).unwrap();
        assert!((at_rho.get(0) - 1.1).abs() < 1e-15);
        assert_eq!(at_rho.total(), at_rho.get(0));
    }

    #[test]
    fn mw_single_edge() {
        let g = single(1);
        let mut oracle = SimpleOracle::new(&g, 0.25).unwrap();
        let run = mw_maxflow(&g, 1.0, &MwConfig::new(0.25), &mut oracle).unwrap();
        let MwOutcome::Feasible { flow, value } = run.outcome else { panic!() };
        assert!(value >= 0.75 * 0.75 / 1.25 - 1e-12);
        assert!((flow[0] - value).abs() < 1e-9);
        assert!(max_congestion(&g, &flow) <= 1.0);
    }

    #[test]
    fn mw_single_edge_overload() {
        let g = single(1);
        let mut oracle = SimpleOracle::new(&g, 0.25).unwrap();
        let run = mw_maxflow(&g, 3.0, &MwConfig::new(0.25), &mut oracle).unwrap();
        assert!(run.outcome.is_fail());
    }

    #[test]
    fn mw_diamond_at_max_flow() {
        let g = diamond();
        let eps = 0.2;
        let mut oracle = SimpleOracle::new(&g, eps).unwrap();
        let mut cfg = MwConfig::new(eps);
        cfg.instrument = true;
        // the cut {s, b} has capacity 2
        let run = mw_maxflow(&g, 2.0, &cfg, &mut oracle).unwrap();
        assert!(run.log.is_clean(), "{:?}", run.log.violations.first());
        let MwOutcome::Feasible { flow, value } = run.outcome else { panic!("{:?}", run.outcome) };
        assert!(value >= (1.0 - eps).powi(2) / (1.0 + eps) * 2.0 - 1e-12);
        assert!(max_congestion(&g, &flow) <= 1.0 + 1e-6);
    }

    #[test]
    fn bottleneck_examples() {
        let path = Graph::new(4, [(0, 1, 5), (1, 2, 2), (2, 3, 7)], 0, 3).unwrap();
        assert_eq!(max_bottleneck_path(&path).unwrap(), 2);
        let two = Graph::new(4, [(0, 1, 3), (1, 3, 9), (0, 2, 8), (2, 3, 4)], 0, 3).unwrap();
        assert_eq!(max_bottleneck_path(&two).unwrap(), 4);
        assert_eq!(max_bottleneck_path(&diamond()).unwrap(), 1);
        let cut = Graph::new(3, [(0, 1, 1)], 0, 2).unwrap();
        assert_eq!(max_bottleneck_path(&cut), Err(Error::Disconnected));
    }

    #[test]
    fn normalize_identity_cases() {
        let (h, info) = normalize_capacities(&diamond(), 0.1).unwrap();
        assert_eq!(h, diamond());
        assert!(info.is_identity());
        let (h, info) = normalize_capacities(&single(1_000_000_000), 0.1).unwrap();
        assert_eq!(h.capacity(0), 1e9);
        assert!(info.is_identity());
    }

    #[test]
    fn normalize_clips_to_m_b() {
        let g = Graph::new(3, [(0, 1, 1_000_000), (1, 2, 1)], 0, 2).unwrap();
        let (h, info) = normalize_capacities(&g, 0.5).unwrap();
        assert_eq!(h.edge(0).capacity, 2);
        assert_eq!(h.edge(1).capacity, 1);
        assert_eq!(info.clipped, 1);
    }

    #[test]
    fn normalize_drops_thin_edges() {
        let g = Graph::new(
            3,
            [(0, 1, 1 << 40), (1, 2, 1 << 40), (0, 2, 1), (0, 1, 1 << 40)],
            0,
            2,
        )
        .unwrap();
        let (h, info) = normalize_capacities(&g, 0.1).unwrap();
        assert_eq!(info.removed, 1);
        assert_eq!(info.edge_map, vec![0, 1, 3]);
        assert!(h.capacity_ratio() <= 2.0 * 16.0 / 0.1);
        let back = info.map_flow(&[1.0, 2.0, 3.0]);
        assert_eq!(back.0, vec![1.0, 2.0, 0.0, 3.0]);
    }

    #[test]
    fn grid_covers_range() {
        let grid = search_grid(2.0, 10, 0.1);
        assert_eq!(grid[0], 2.0);
        assert_eq!(*grid.last().unwrap(), 20.0);
        assert!(grid.windows(2).all(|w| w[1] <= w[0] * (1.0 + 0.1 / 8.0) + 1e-12));
        assert_eq!(search_grid(3.0, 1, 0.1), vec![3.0]);
    }

    #[test]
    fn search_single_edge() {
        let g = single(5);
        let out = binary_search_maxflow(&g, &FlowConfig::simple(0.1)).unwrap();
        assert!(out.value >= 0.5 * 5.0);
        assert!(max_congestion(&g, &out.flow) <= 1.0 + 1e-6);
    }

    #[test]
    fn search_diamond() {
        let g = diamond();
        let eps = 0.1;
        let out = binary_search_maxflow(&g, &FlowConfig::simple(eps)).unwrap();
        assert!(out.value >= (1.0 - 5.0 * eps) * 2.0, "{}", out.value);
        assert!(max_congestion(&g, &out.flow) <= 1.0 + 1e-6);
    }

    #[test]
    fn search_disconnected() {
        let g = Graph::new(3, [(0, 1, 1)], 0, 2).unwrap();
        assert_eq!(
            binary_search_maxflow(&g, &FlowConfig::simple(0.1)).unwrap_err(),
            Error::Disconnected
        );
    }
}
