//! The width-reduced oracle: edges whose congestion exceeds `ρ` are removed
//! permanently and the electrical flow is recomputed without them.

use std::sync::Arc;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::{EdgeId, Graph};
use crate::instrument::{InstrumentLog, Violation};
use crate::laplacian::{solve_approx_from, solve_exact, LaplacianPattern, LaplacianSystem};
use crate::mw::{
    check_eps, iteration_count, ln_m, mw_maxflow, oracle_resistances, FlowConfig, FlowOracle,
    MwRun, OracleFailure, OracleFlow, OracleOutcome, WeightVector, WEIGHT_SLACK,
};

/// Overrides for the improved algorithm.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct ImprovedParams {
    /// Width threshold; defaults to [`improved_rho`].
    pub rho: Option<f64>,
}

/// `8 (m ln m)^{1/3} / ε`.
pub fn improved_rho(m: usize, eps: f64) -> f64 {
    8.0 * (m as f64 * ln_m(m)).cbrt() / eps
}

/// Bounds on `|H|` and `u(H)`: `30 m ln m / (ε²ρ²)` and `30 m F ln m / (ε²ρ³)`.
pub fn forbidden_bounds(m: usize, eps: f64, rho: f64, value: f64) -> (f64, f64) {
    let base = 30.0 * m as f64 * ln_m(m) / (eps * eps * rho * rho);
    (base, base * value / rho)
}

/// Upper bound on the number of linear systems in one run:
/// `N + ⌈30 m ln m / (ε²ρ²)⌉ + 1`, which for the default `ρ` equals
/// `N + ⌈(15/32)(m ln m)^{1/3}⌉ + 1`.
pub fn solve_bound(m: usize, eps: f64, rho: f64) -> usize {
    let (card, _) = forbidden_bounds(m, eps, rho, 1.0);
    iteration_count(rho, eps, m) + card.ceil() as usize + 1
}

/// Edges removed so far. Only ever grows.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct ForbiddenSet {
    edges: Vec<EdgeId>,
    member: Vec<bool>,
    capacity: f64,
}

impl ForbiddenSet {
    pub fn new(m: usize) -> Self {
        Self {
            edges: Vec::new(),
            member: vec![false; m],
            capacity: 0.0,
        }
    }

    /// Returns `false` if `e` was already forbidden.
    pub fn insert(&mut self, g: &Graph, e: EdgeId) -> bool {
        if self.member[e] {
            return false;
        }
        self.member[e] = true;
        self.edges.push(e);
        self.capacity += g.capacity(e);
        true
    }

    pub fn contains(&self, e: EdgeId) -> bool {
        self.member[e]
    }

    pub fn len(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }

    /// `u(H)`.
    pub fn capacity(&self) -> f64 {
        self.capacity
    }

    /// Edges in insertion order.
    pub fn edges(&self) -> &[EdgeId] {
        &self.edges
    }

    pub fn live_edges(&self) -> Vec<EdgeId> {
        (0..self.member.len()).filter(|&e| !self.member[e]).collect()
    }

    pub fn check_bounds(&self, m: usize, eps: f64, rho: f64, value: f64) -> Result<()> {
        let (card, cap) = forbidden_bounds(m, eps, rho, value);
        if self.len() as f64 > card {
            return Err(Error::ForbiddenBound(format!("|H| = {} exceeds {card}", self.len())));
        }
        if self.capacity > cap * (1.0 + WEIGHT_SLACK) {
            return Err(Error::ForbiddenBound(format!(
                "u(H) = {} exceeds {cap}",
                self.capacity
            )));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PhiStep {
    /// Index of the linear system, starting at 1.
    pub step: usize,
    pub reff: f64,
    /// An edge was forbidden between the previous solve and this one.
    pub after_cut: bool,
}

/// Exact effective resistances after every electrical solve of a run.
#[derive(Debug, Clone, PartialEq, Default, Serialize)]
pub struct PhiTrace {
    pub steps: Vec<PhiStep>,
}

impl PhiTrace {
    /// Checks monotonicity, the starting lower bound (only when
    /// `F ≤ F* ≤ mF` for the supplied `F*`), and the growth across cuts.
    pub fn validate(
        &self,
        m: usize,
        eps: f64,
        rho: f64,
        value: f64,
        max_flow: Option<f64>,
    ) -> Vec<Violation> {
        let mut log = InstrumentLog::new(true);
        self.validate_into(m, eps, rho, value, max_flow, &mut log);
        log.violations
    }

    pub fn validate_into(
        &self,
        m: usize,
        eps: f64,
        rho: f64,
        value: f64,
        max_flow: Option<f64>,
        log: &mut InstrumentLog,
    ) {
        let jump = 1.0 - eps * rho * rho / (5.0 * m as f64);
        if let (Some(first), Some(fs)) = (self.steps.first(), max_flow) {
            if value <= fs && fs <= m as f64 * value {
                let lower = 1.0 / ((m as f64).powi(4) * value * value);
                log.check(first.reff >= lower, first.step, "phi_start", || {
                    format!("Φ(1) = {:e} below {lower:e}", first.reff)
                });
            }
        }
        for pair in self.steps.windows(2) {
            let (prev, cur) = (pair[0], pair[1]);
            log.check(cur.reff >= prev.reff * (1.0 - WEIGHT_SLACK), cur.step, "phi_monotone", || {
                format!("Φ decreased from {:e} to {:e}", prev.reff, cur.reff)
            });
            if cur.after_cut {
                log.check(jump * cur.reff > prev.reff * (1.0 - WEIGHT_SLACK), cur.step, "phi_cut_jump", || {
                    format!(
                        "(1 - ερ²/5m) Φ(j) = {:e} not above Φ(j-1) = {:e}",
                        jump * cur.reff,
                        prev.reff
                    )
                });
            }
        }
    }

    pub fn cuts(&self) -> usize {
        self.steps.iter().filter(|s| s.after_cut).count()
    }
}

/// The oracle that removes over-congested edges.
pub struct ImprovedOracle<'g> {
    g: &'g Graph,
    eps: f64,
    rho: f64,
    value: f64,
    forbidden: ForbiddenSet,
    live: Vec<EdgeId>,
    pattern: Arc<LaplacianPattern>,
    warm: Option<Vec<f64>>,
    solves: usize,
    phi: Option<PhiTrace>,
    pending_cut: bool,
}

impl<'g> ImprovedOracle<'g> {
    pub fn new(g: &'g Graph, eps: f64, rho: f64, value: f64, trace_phi: bool) -> Result<Self> {
        check_eps(eps, 0.5)?;
        if rho.is_nan() || rho <= 0.0 {
            return Err(Error::InvalidParameter(format!("rho must be positive, got {rho}")));
        }
        let live: Vec<EdgeId> = (0..g.m()).collect();
        let pattern = Arc::new(LaplacianPattern::new(g, &live)?);
        Ok(Self {
            g,
            eps,
            rho,
            value,
            forbidden: ForbiddenSet::new(g.m()),
            live,
            pattern,
            warm: None,
            solves: 0,
            phi: trace_phi.then(PhiTrace::default),
            pending_cut: false,
        })
    }

    pub fn forbidden_set(&self) -> &ForbiddenSet {
        &self.forbidden
    }

    pub fn phi_trace(&self) -> Option<&PhiTrace> {
        self.phi.as_ref()
    }

    fn forbid(&mut self, e: EdgeId) -> Result<()> {
        self.forbidden.insert(self.g, e);
        self.forbidden
            .check_bounds(self.g.m(), self.eps, self.rho, self.value)?;
        self.live = self.forbidden.live_edges();
        self.pattern = Arc::new(LaplacianPattern::new(self.g, &self.live)?);
        self.pending_cut = true;
        Ok(())
    }
}

impl FlowOracle for ImprovedOracle<'_> {
    fn rho(&self) -> f64 {
        self.rho
    }

    fn query(
        &mut self,
        w: &WeightVector,
        value: f64,
        _iteration: usize,
        _log: &mut InstrumentLog,
    ) -> Result<OracleOutcome> {
        let budget = (1.0 + self.eps) * w.total();
        loop {
            if !self.pattern.is_connected() {
                return Ok(OracleOutcome::Fail(OracleFailure::Disconnected));
            }
            let r = oracle_resistances(self.g, w, self.eps, &self.live)?;
            let sys = LaplacianSystem::with_pattern(self.pattern.clone(), r)?;
            let sol = solve_approx_from(&sys, value, self.eps / 3.0, self.warm.as_deref())?;
            self.solves += 1;
            if let Some(trace) = self.phi.as_mut() {
                let reff = solve_exact(&sys, 1.0)?.energy;
                trace.steps.push(PhiStep {
                    step: self.solves,
                    reff,
                    after_cut: std::mem::take(&mut self.pending_cut),
                });
            }
            self.warm = Some(sol.potentials.into_inner());
            if sol.energy > budget {
                return Ok(OracleOutcome::Fail(OracleFailure::EnergyExceeded {
                    energy: sol.energy,
                    budget,
                }));
            }
            let worst = self
                .live
                .iter()
                .map(|&e| (e, sol.flow[e].abs() / self.g.capacity(e)))
                .max_by(|a, b| a.1.total_cmp(&b.1));
            match worst {
                Some((e, c)) if c > self.rho => self.forbid(e)?,
                _ => {
                    return Ok(OracleOutcome::Success(OracleFlow {
                        flow: sol.flow,
                        energy: sol.energy,
                    }))
                }
            }
        }
    }

    fn linear_solves(&self) -> usize {
        self.solves
    }

    fn forbidden(&self) -> (usize, f64) {
        (self.forbidden.len(), self.forbidden.capacity())
    }

    fn last_phi(&self) -> Option<f64> {
        self.phi.as_ref().and_then(|t| t.steps.last()).map(|s| s.reff)
    }
}

/// What an improved run leaves behind besides the flow.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ImprovedExtras {
    pub rho: f64,
    pub forbidden: Vec<EdgeId>,
    pub forbidden_capacity: f64,
    pub forbidden_card_bound: f64,
    pub forbidden_capacity_bound: f64,
    pub solve_bound: usize,
    pub phi: Option<PhiTrace>,
}

/// The multiplicative-weights driver over the width-reducing oracle.
pub fn improved_maxflow(
    g: &Graph,
    value: f64,
    config: &FlowConfig,
    params: &ImprovedParams,
) -> Result<(MwRun, ImprovedExtras)> {
    let eps = config.eps;
    check_eps(eps, 0.5)?;
    let m = g.m();
    let rho = params.rho.unwrap_or_else(|| improved_rho(m, eps));
    let mut oracle = ImprovedOracle::new(g, eps, rho, value, config.phi_trace)?;
    let mut run = mw_maxflow(g, value, &config.mw(), &mut oracle)?;
    let (card, cap) = forbidden_bounds(m, eps, rho, value);
    let bound = solve_bound(m, eps, rho);
    let solves = run.linear_solves;
    run.log.check(solves <= bound, run.iterations, "solve_count", || {
        format!("{solves} linear systems, bound {bound}")
    });
    if let Some(trace) = oracle.phi.as_ref() {
        trace.validate_into(m, eps, rho, value, None, &mut run.log);
    }
    let extras = ImprovedExtras {
        rho,
        forbidden: oracle.forbidden.edges().to_vec(),
        forbidden_capacity: oracle.forbidden.capacity(),
        forbidden_card_bound: card,
        forbidden_capacity_bound: cap,
        solve_bound: bound,
        phi: oracle.phi,
    };
    Ok((run, extras))
}
