//! Approximate minimum s-t cut from the potentials of a sequence of
//! reweighted electrical flows.

use std::sync::Arc;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::{congestion, Cut, EdgeId, Graph};
use crate::instrument::InstrumentLog;
use crate::laplacian::{solve_approx_from, solve_exact, LaplacianPattern, LaplacianSystem, ResistanceVector};
use crate::mw::{check_eps, ln_m, max_bottleneck_path, search_grid, WeightVector, WEIGHT_SLACK};

/// Absolute slack on the sweep and potential-drop checks.
pub const DUAL_SLACK: f64 = 1e-9;

/// `3 m^{1/3} ε^{-2/3}`.
pub fn dual_rho(m: usize, eps: f64) -> f64 {
    3.0 * (m as f64).cbrt() * eps.powf(-2.0 / 3.0)
}

/// `⌈5 ε^{-8/3} m^{1/3} ln m⌉`, at least one.
pub fn dual_iterations(m: usize, eps: f64) -> usize {
    ((5.0 * eps.powf(-8.0 / 3.0) * (m as f64).cbrt() * ln_m(m)).ceil() as usize).max(1)
}

#[derive(Debug, Clone, PartialEq)]
pub struct DualState {
    pub w: WeightVector,
    pub iteration: usize,
    pub eps: f64,
    pub rho: f64,
    pub n_iter: usize,
    pub delta: f64,
}

impl DualState {
    pub fn new(m: usize, eps: f64) -> Self {
        Self {
            w: WeightVector::ones(m),
            iteration: 0,
            eps,
            rho: dual_rho(m, eps),
            n_iter: dual_iterations(m, eps),
            delta: eps * eps,
        }
    }

    /// `μ = Σ w_e`.
    pub fn mu(&self) -> f64 {
        self.w.total()
    }

    /// `r_e = w_e / u_e²`.
    pub fn resistances(&self, g: &Graph) -> Result<ResistanceVector> {
        let values = (0..g.m())
            .map(|e| {
                let u = g.capacity(e);
                self.w.get(e) / (u * u)
            })
            .collect();
        ResistanceVector::all_edges(values)
    }
}

/// `w_e ← w_e + (ε/ρ) cong(e) w_e + ε² μ / (m ρ)`.
pub fn dual_update(state: &mut DualState, f: &[f64], g: &Graph) -> Result<()> {
    if f.len() != g.m() {
        return Err(Error::DimensionMismatch {
            expected: g.m(),
            got: f.len(),
        });
    }
    let cong = congestion(g, f);
    state.w.additive_multiplicative(&cong.per_edge, state.eps, state.rho);
    state.iteration += 1;
    Ok(())
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepCutResult {
    pub cut: Cut,
    /// The threshold `x` with `S = {v : φ_v > x}` after normalizing `φ_s = 1, φ_t = 0`.
    pub threshold: f64,
    pub capacity: f64,
}

/// Potentials translated and scaled to `φ_s = 1`, `φ_t = 0`.
pub fn normalized_potentials(g: &Graph, phi: &[f64]) -> Result<Vec<f64>> {
    if phi.len() != g.n() {
        return Err(Error::DimensionMismatch {
            expected: g.n(),
            got: phi.len(),
        });
    }
    let (ps, pt) = (phi[g.s()], phi[g.t()]);
    let span = ps - pt;
    if span == 0.0 || !span.is_finite() {
        return Err(Error::InvalidCut("source and sink potentials coincide".into()));
    }
    let mut out: Vec<f64> = phi.iter().map(|&p| (p - pt) / span).collect();
    out[g.s()] = 1.0;
    out[g.t()] = 0.0;
    Ok(out)
}

/// `Σ_e |φ_u - φ_v| u_e`.
pub fn potential_drop_sum(g: &Graph, phi: &[f64]) -> f64 {
    g.edges()
        .iter()
        .map(|e| (phi[e.tail] - phi[e.head]).abs() * e.capacity as f64)
        .sum()
}

/// Minimum-capacity threshold cut `S_x = {v : φ_v > x}` over every
/// distinct normalized potential `x ∈ [0, 1)`. Ties keep the smaller side.
pub fn sweep_cut(g: &Graph, phi: &[f64]) -> Result<SweepCutResult> {
    let x = normalized_potentials(g, phi)?;
    let inc = g.incidence();
    let mut order: Vec<usize> = (0..g.n()).collect();
    order.sort_by(|&a, &b| x[b].total_cmp(&x[a]));

    let mut inside = vec![false; g.n()];
    let mut capacity = 0.0;
    let mut best: Option<(f64, f64, Vec<bool>)> = None;
    let mut i = 0;
    while i < order.len() {
        let level = x[order[i]];
        if level < 0.0 {
            break;
        }
        if level < 1.0 && best.as_ref().is_none_or(|b| capacity < b.0) {
            best = Some((capacity, level, inside.clone()));
        }
        while i < order.len() && x[order[i]] == level {
            let v = order[i];
            inside[v] = true;
            for &e in &inc[v] {
                let edge = g.edge(e);
                let c = edge.capacity as f64;
                if inside[edge.other(v)] {
                    capacity -= c;
                } else {
                    capacity += c;
                }
            }
            i += 1;
        }
    }
    let (_, threshold, side) = best.expect("the sink level 0 is always a threshold");
    let cut = Cut::new(g, side)?;
    Ok(SweepCutResult {
        capacity: cut.capacity,
        cut,
        threshold,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DualIterationRecord {
    pub iteration: usize,
    pub mu: f64,
    pub max_congestion: f64,
    pub sweep_capacity: f64,
    pub reff: Option<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub enum DualOutcome {
    Cut(SweepCutResult),
    Fail,
}

#[derive(Debug, Clone, PartialEq)]
pub struct DualRun {
    pub outcome: DualOutcome,
    pub rho: f64,
    pub planned_iterations: usize,
    pub iterations: usize,
    pub linear_solves: usize,
    pub log: InstrumentLog,
    pub history: Vec<DualIterationRecord>,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DualConfig {
    pub eps: f64,
    pub instrument: bool,
    pub record_history: bool,
}

impl DualConfig {
    pub fn new(eps: f64) -> Self {
        Self {
            eps,
            instrument: false,
            record_history: false,
        }
    }
}

/// Runs the dual algorithm at target value `F`: returns the first sweep cut
/// of capacity below `F/(1-7ε)`, or `Fail` after `N` iterations.
pub fn dual_cut(g: &Graph, value: f64, config: &DualConfig) -> Result<DualRun> {
    let eps = config.eps;
    check_eps(eps, 1.0 / 7.0)?;
    if !(value > 0.0 && value.is_finite()) {
        return Err(Error::InvalidParameter(format!("flow value must be positive, got {value}")));
    }
    let live: Vec<EdgeId> = (0..g.m()).collect();
    let pattern = Arc::new(LaplacianPattern::new(g, &live)?);
    if !pattern.is_connected() {
        return Err(Error::Disconnected);
    }
    let m = g.m() as f64;
    let mut state = DualState::new(g.m(), eps);
    let threshold = value / (1.0 - 7.0 * eps);
    let mut log = InstrumentLog::new(config.instrument);
    let mut history = Vec::new();
    let mut warm: Option<Vec<f64>> = None;
    let growth = (eps * (1.0 - 2.0 * eps) / state.rho).exp();
    let jump = (eps * eps * state.rho * state.rho / (4.0 * m)).exp();
    // Reff of the previous iteration when it predicted a jump
    let mut expect_jump: Option<f64> = None;

    for i in 0..state.n_iter {
        let sys = LaplacianSystem::with_pattern(pattern.clone(), state.resistances(g)?)?;
        let sol = solve_approx_from(&sys, value, state.delta, warm.as_deref())?;
        let mu = state.mu();
        let cong = congestion(g, &sol.flow);

        let reff = if log.enabled {
            let exact = solve_exact(&sys, 1.0)?;
            let reff = exact.energy;
            if let Some(prev) = expect_jump.take() {
                log.check(reff >= prev * jump * (1.0 - WEIGHT_SLACK), i, "reff_jump", || {
                    format!("Reff {prev:e} -> {reff:e}, expected factor {jump}")
                });
            }
            let bound = (mu / reff).sqrt();
            let exact_drop = potential_drop_sum(g, &normalized_potentials(g, &exact.potentials)?);
            log.check(exact_drop <= bound + DUAL_SLACK, i, "potential_drop_exact", || {
                format!("Σ|Δφ|u = {exact_drop} above √(μ/Reff) = {bound}")
            });
            let approx_drop = potential_drop_sum(g, &normalized_potentials(g, &sol.potentials)?);
            let limit = (1.0 + 2.0 * state.delta) * bound;
            log.check(approx_drop <= limit + DUAL_SLACK, i, "potential_drop_approx", || {
                format!("Σ|Δφ̃|u = {approx_drop} above (1+2δ)√(μ/Reff) = {limit}")
            });
            Some(reff)
        } else {
            None
        };

        dual_update(&mut state, &sol.flow, g)?;
        let mu_next = state.mu();
        if let Some(reff) = reff {
            let small = value * value * reff <= (1.0 - 7.0 * eps) * mu;
            if small {
                log.check(mu_next <= mu * growth * (1.0 + WEIGHT_SLACK), i, "dual_weight_growth", || {
                    format!("mu {mu:e} -> {mu_next:e}, limit factor {growth}")
                });
                if cong.max > state.rho {
                    expect_jump = Some(reff);
                }
            }
            let floor = eps / m * mu_next;
            let low = state.w.values().iter().copied().fold(f64::INFINITY, f64::min);
            log.check(low >= floor * (1.0 - WEIGHT_SLACK), i, "dual_weight_floor", || {
                format!("min weight {low:e} below (ε/m)μ = {floor:e}")
            });
        }

        let sweep = sweep_cut(g, &sol.potentials)?;
        if log.enabled {
            let phi = normalized_potentials(g, &sol.potentials)?;
            let bound = potential_drop_sum(g, &phi);
            log.check(sweep.capacity <= bound + DUAL_SLACK, i, "sweep_bound", || {
                format!("sweep capacity {} above Σ|Δφ|u = {bound}", sweep.capacity)
            });
        }
        if config.record_history {
            history.push(DualIterationRecord {
                iteration: i,
                mu,
                max_congestion: cong.max,
                sweep_capacity: sweep.capacity,
                reff,
            });
        }
        warm = Some(sol.potentials.into_inner());
        if sweep.capacity < threshold {
            return Ok(DualRun {
                outcome: DualOutcome::Cut(sweep),
                rho: state.rho,
                planned_iterations: state.n_iter,
                iterations: i + 1,
                linear_solves: i + 1,
                log,
                history,
            });
        }
    }
    Ok(DualRun {
        outcome: DualOutcome::Fail,
        rho: state.rho,
        planned_iterations: state.n_iter,
        iterations: state.n_iter,
        linear_solves: state.n_iter,
        log,
        history,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DualProbe {
    pub index: usize,
    pub value: f64,
    pub succeeded: bool,
    pub iterations: usize,
    pub capacity: Option<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct DualSearchOutcome {
    pub cut: SweepCutResult,
    /// Smallest grid value at which a cut was found.
    pub target: f64,
    pub probes: Vec<DualProbe>,
    pub iterations: usize,
    pub linear_solves: usize,
    pub log: InstrumentLog,
}

/// Binary search for the smallest grid value `F ∈ [B, mB]` at which the
/// dual algorithm succeeds; returns the smallest cut seen. Its capacity is
/// below `(1+ε/8) F* / (1-7ε)`.
pub fn dual_binary_search(g: &Graph, config: &DualConfig) -> Result<DualSearchOutcome> {
    check_eps(config.eps, 1.0 / 7.0)?;
    let b = max_bottleneck_path(g)? as f64;
    let grid = search_grid(b, g.m(), config.eps);
    let mut probes = Vec::new();
    let mut log = InstrumentLog::new(config.instrument);
    let (mut iterations, mut linear_solves) = (0, 0);
    let mut best: Option<SweepCutResult> = None;
    let mut probe = |k: usize, best: &mut Option<SweepCutResult>, log: &mut InstrumentLog| -> Result<bool> {
        let run = dual_cut(g, grid[k], config)?;
        iterations += run.iterations;
        linear_solves += run.linear_solves;
        log.absorb(run.log);
        let capacity = match run.outcome {
            DualOutcome::Cut(c) => {
                let cap = c.capacity;
                if best.as_ref().is_none_or(|b| cap < b.capacity) {
                    *best = Some(c);
                }
                Some(cap)
            }
            DualOutcome::Fail => None,
        };
        probes.push(DualProbe {
            index: k,
            value: grid[k],
            succeeded: capacity.is_some(),
            iterations: run.iterations,
            capacity,
        });
        Ok(capacity.is_some())
    };

    // lo fails (or is below the grid), hi succeeds
    let top = grid.len() - 1;
    let (mut lo, mut hi) = (None::<usize>, top);
    let mut hi_checked = false;
    loop {
        let bottom = lo.map_or(0, |l| l + 1);
        if bottom >= hi {
            break;
        }
        let mid = bottom + (hi - bottom) / 2;
        if probe(mid, &mut best, &mut log)? {
            hi = mid;
            hi_checked = true;
        } else {
            lo = Some(mid);
        }
    }
    if !hi_checked && !probe(hi, &mut best, &mut log)? {
        return Err(Error::AlgorithmFailed(format!(
            "no cut found even at the upper value {}",
            grid[hi]
        )));
    }
    Ok(DualSearchOutcome {
        cut: best.expect("a successful probe records a cut"),
        target: grid[hi],
        probes,
        iterations,
        linear_solves,
        log,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn diamond() -> Graph {
        Graph::new(4, [(0, 1, 1), (0, 2, 2), (1, 3, 2), (2, 3, 1)], 0, 3).unwrap()
    }

    #[test]
    fn parameters() {
        assert!((dual_rho(27, 0.125) - 9.0 * 4.0).abs() < 1e-9);
        let n = dual_iterations(8, 0.1);
        let want = 5.0 * 0.1f64.powf(-8.0 / 3.0) * 2.0 * 8f64.ln();
        assert_eq!(n, want.ceil() as usize);
    }

    #[test]
    fn update_examples() {
        let g = Graph::new(3, [(0, 1, 1), (1, 2, 1)], 0, 2).unwrap();
        let eps = 0.1;
        let mut st = DualState::new(2, eps);
        let rho = st.rho;
        dual_update(&mut st, &[0.0, 0.0], &g).unwrap();
        assert!((st.w.get(0) - (1.0 + eps * eps / rho)).abs() < 1e-15);

        let mut st = DualState::new(2, eps);
        dual_update(&mut st, &[rho, 0.0], &g).unwrap();
        assert!((st.w.get(0) - st.w.get(1) - eps).abs() < 1e-15);

        let mut st = DualState::new(2, eps);
        let c = 0.7;
        dual_update(&mut st, &[c, c], &g).unwrap();
        let want = 2.0 * (1.0 + eps * c / rho + eps * eps / rho);
        assert!((st.mu() - want).abs() < 1e-14);
    }

    #[test]
    fn sweep_path() {
        let g = Graph::new(3, [(0, 1, 3), (1, 2, 1)], 0, 2).unwrap();
        let r = sweep_cut(&g, &[1.0, 0.5, 0.0]).unwrap();
        assert_eq!(r.capacity, 1.0);
        assert_eq!(r.cut.side_s, vec![true, true, false]);
    }

    #[test]
    fn sweep_tie_prefers_smaller_side() {
        let g = Graph::new(4, [(0, 1, 1), (0, 2, 1), (1, 3, 1), (2, 3, 1)], 0, 3).unwrap();
        let r = sweep_cut(&g, &[1.0, 0.5, 0.5, 0.0]).unwrap();
        assert_eq!(r.capacity, 2.0);
        assert_eq!(r.cut.source_side_len(), 1);
    }

    #[test]
    fn sweep_triangle_bound() {
        let g = Graph::new(3, [(0, 2, 1), (0, 1, 1), (1, 2, 1)], 0, 2).unwrap();
        let phi = [1.0, 0.5, 0.0];
        let r = sweep_cut(&g, &phi).unwrap();
        assert_eq!(r.capacity, 2.0);
        assert_eq!(potential_drop_sum(&g, &phi), 2.0);
    }

    #[test]
    fn sweep_normalizes_and_rejects_degenerate() {
        let g = Graph::new(3, [(0, 1, 3), (1, 2, 1)], 0, 2).unwrap();
        let r = sweep_cut(&g, &[7.0, 5.0, 3.0]).unwrap();
        assert_eq!(r.capacity, 1.0);
        assert!(matches!(sweep_cut(&g, &[1.0, 2.0, 1.0]), Err(Error::InvalidCut(_))));
    }

    #[test]
    fn dual_single_edge() {
        let g = Graph::new(2, [(0, 1, 5)], 0, 1).unwrap();
        let run = dual_cut(&g, 5.0, &DualConfig::new(0.1)).unwrap();
        let DualOutcome::Cut(c) = run.outcome else { panic!() };
        assert_eq!(c.capacity, 5.0);
        assert_eq!(c.cut.side_s, vec![true, false]);
    }

    #[test]
    fn dual_diamond_at_max_flow() {
        let g = diamond();
        let mut cfg = DualConfig::new(0.1);
        cfg.instrument = true;
        let run = dual_cut(&g, 2.0, &cfg).unwrap();
        assert!(run.log.is_clean(), "{:?}", run.log.violations.first());
        let DualOutcome::Cut(c) = run.outcome else { panic!() };
        assert!(c.capacity >= 2.0 && c.capacity < 2.0 / 0.3);
    }

    #[test]
    fn dual_rejects_large_eps() {
        let g = diamond();
        assert!(matches!(dual_cut(&g, 2.0, &DualConfig::new(1.0 / 7.0)), Err(Error::InvalidParameter(_))));
    }

    #[test]
    fn search_examples() {
        let eps = 0.1;
        let single = Graph::new(2, [(0, 1, 4)], 0, 1).unwrap();
        assert_eq!(dual_binary_search(&single, &DualConfig::new(eps)).unwrap().cut.capacity, 4.0);
        let d = dual_binary_search(&diamond(), &DualConfig::new(eps)).unwrap();
        assert!(d.cut.capacity <= (1.0 + 9.0 * eps) * 2.0);
        let path = Graph::new(4, [(0, 1, 4), (1, 2, 1), (2, 3, 6)], 0, 3).unwrap();
        let p = dual_binary_search(&path, &DualConfig::new(eps)).unwrap();
        assert!(p.cut.capacity <= 1.0 + 9.0 * eps);
    }

    #[test]
    fn search_disconnected() {
        let g = Graph::new(3, [(0, 1, 1)], 0, 2).unwrap();
        assert_eq!(dual_binary_search(&g, &DualConfig::new(0.1)).unwrap_err(), Error::Disconnected);
    }
}
