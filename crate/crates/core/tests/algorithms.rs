
use elecflow::dualcut::{dual_binary_search, dual_cut, DualConfig, DualOutcome};
use elecflow::exact::{enumerate_min_cut, exact_maxflow};
use elecflow::generate::{corpus, parallel_paths};
use elecflow::graph::{cut_capacity, max_congestion, net_flow_across};
use elecflow::improved::{improved_maxflow, ImprovedParams};
use elecflow::laplacian::demand_error;
use elecflow::mw::{binary_search_maxflow, mw_maxflow, FlowConfig, MwConfig, MwOutcome, SimpleOracle};
use elecflow::{Error, Graph};


fn small_corpus() -> Vec<Graph> {
    corpus(12, 4..=14, 30, 2.5, 99)
}

#[test]
fn shortcut_is_forbidden_on_parallel_paths() {
    let g = parallel_paths(16).unwrap();
    let mut cfg = FlowConfig::improved(0.1);
    cfg.phi_trace = true;
    cfg.instrument = true;
    let (run, extras) = improved_maxflow(&g, 17.0, &cfg, &ImprovedParams { rho: Some(8.0) }).unwrap();
    assert!(extras.forbidden.contains(&0), "forbidden {:?}", extras.forbidden);
    assert!(extras.phi.unwrap().cuts() >= 1);
    assert_eq!(run.log.count("solve_count"), 0);
}

#[test]
fn improved_respects_forbidden_bounds() {
    for eps in [0.1, 0.25, 0.4] {
        for g in small_corpus() {
            let fs = exact_maxflow(&g).value as f64;
            let mut cfg = FlowConfig::improved(eps);
            cfg.instrument = true;
            let (run, x) = improved_maxflow(&g, fs, &cfg, &ImprovedParams::default()).unwrap();
            assert!(x.forbidden.len() as f64 <= x.forbidden_card_bound);
            assert!(x.forbidden_capacity <= x.forbidden_capacity_bound);
            assert!(run.linear_solves <= x.solve_bound);
            assert_eq!(run.log.count("solve_count"), 0);
        }
    }
}

#[test]
fn forced_cuts_keep_bounds_or_report_them() {
    for g in small_corpus() {
        let fs = exact_maxflow(&g).value as f64;
        let cfg = FlowConfig::improved(0.25);
        match improved_maxflow(&g, fs, &cfg, &ImprovedParams { rho: Some(1.8) }) {
            Ok((_, x)) => {
                assert!(x.forbidden.len() as f64 <= x.forbidden_card_bound);
                assert!(x.forbidden_capacity <= x.forbidden_capacity_bound);
            }
            Err(Error::ForbiddenBound(_)) => {}
            Err(e) => panic!("unexpected error {e}"),
        }
    }
}

#[test]
fn simple_never_fails_below_max_flow() {
    for g in small_corpus() {
        let fs = exact_maxflow(&g).value as f64;
        for frac in [0.5, 1.0] {
            let mut oracle = SimpleOracle::new(&g, 0.2).unwrap();
            let cfg = MwConfig {
                eps: 0.2,
                instrument: true,
                record_history: false,
            };
            let run = mw_maxflow(&g, frac * fs, &cfg, &mut oracle).unwrap();
            match run.outcome {
                MwOutcome::Feasible { flow, value } => {
                    let scaled = 0.8f64.powi(2) / 1.2 * frac * fs;
                    assert!((value - scaled).abs() < 1e-9 * fs);
                    assert!(demand_error(&g, &flow, value).unwrap() < 1e-8 * fs);
                    assert!(max_congestion(&g, &flow) <= 1.0 + 1e-9);
                }
                MwOutcome::Fail { iteration, reason } => {
                    panic!("failed at {iteration}: {reason:?}")
                }
            }
            assert!(run.log.is_clean(), "{:?}", run.log.violations);
        }
    }
}

#[test]
fn improved_never_fails_below_max_flow() {
    for g in small_corpus() {
        let fs = exact_maxflow(&g).value as f64;
        let (run, _) = improved_maxflow(&g, fs, &FlowConfig::improved(0.25), &ImprovedParams::default()).unwrap();
        assert!(matches!(run.outcome, MwOutcome::Feasible { .. }));
    }
}

#[test]
fn mw_fails_well_above_max_flow() {
    for g in small_corpus().into_iter().take(4) {
        let fs = exact_maxflow(&g).value as f64;
        let mut oracle = SimpleOracle::new(&g, 0.2).unwrap();
        let cfg = MwConfig {
            eps: 0.2,
            instrument: false,
            record_history: false,
        };
        let run = mw_maxflow(&g, 3.0 * fs, &cfg, &mut oracle).unwrap();
        assert!(matches!(run.outcome, MwOutcome::Fail { .. }));
    }
}

#[test]
fn binary_search_is_feasible_and_near_optimal() {
    for g in small_corpus() {
        let fs = exact_maxflow(&g).value as f64;
        for cfg in [FlowConfig::simple(0.2), FlowConfig::improved(0.2)] {
            let out = binary_search_maxflow(&g, &cfg).unwrap();
            assert!(max_congestion(&g, &out.flow) <= 1.0 + 1e-6);
            assert!(out.value >= (1.0 - 5.0 * 0.2) * fs);
            assert!(out.value <= fs * (1.0 + 1e-9));
            assert!(demand_error(&g, &out.flow, out.value).unwrap() < 1e-8 * fs);
        }
    }
}

#[test]
fn dual_cut_is_valid_and_instrumented_clean() {
    let eps = 0.1;
    let mut cfg = DualConfig::new(eps);
    cfg.instrument = true;
    for g in small_corpus() {
        let fs = exact_maxflow(&g).value as f64;
        let run = dual_cut(&g, fs, &cfg).unwrap();
        let DualOutcome::Cut(c) = run.outcome else {
            panic!("no cut at F*");
        };
        assert!(c.cut.side_s[g.s()] && !c.cut.side_s[g.t()]);
        assert!((cut_capacity(&g, &c.cut.side_s).unwrap() - c.capacity).abs() < 1e-9);
        assert!(c.capacity >= fs - 1e-9);
        assert!(c.capacity < fs / (1.0 - 7.0 * eps));
        assert!(run.log.is_clean(), "{:?}", run.log.violations);
        assert!(run.log.checks > 0);
    }
}

#[test]
fn dual_search_brackets_min_cut() {
    let eps = 0.1;
    for g in small_corpus() {
        let fs = exact_maxflow(&g).value as f64;
        let out = dual_binary_search(&g, &DualConfig::new(eps)).unwrap();
        assert!(out.cut.capacity >= fs - 1e-9);
        assert!(out.cut.capacity <= fs * (1.0 + eps / 8.0) / (1.0 - 7.0 * eps) + 1e-9);
    }
}

#[test]
fn dual_rejects_large_eps() {
    let g = parallel_paths(3).unwrap();
    assert!(matches!(
        dual_cut(&g, 4.0, &DualConfig::new(0.2)),
        Err(Error::InvalidParameter(_))
    ));
}

#[test]
fn exact_agrees_with_enumeration() {
    for g in corpus(40, 3..=12, 40, 3.0, 5) {
        let ex = exact_maxflow(&g);
        assert_eq!(ex.value, enumerate_min_cut(&g).unwrap());
        assert_eq!(cut_capacity(&g, &ex.mincut.side_s).unwrap(), ex.value as f64);
        for e in 0..g.m() {
            assert!(ex.flow[e].abs() <= g.capacity(e) + 1e-9);
        }
        assert!(demand_error(&g, &ex.flow, ex.value as f64).unwrap() < 1e-9);
        let crossing = net_flow_across(&g, &ex.flow, &ex.mincut.side_s);
        assert!((crossing - ex.value as f64).abs() < 1e-9);
    }
}

#[test]
fn enumeration_refuses_large_graphs() {
    let g = corpus(1, 25..=25, 60, 2.0, 1).pop().unwrap();
    assert!(matches!(enumerate_min_cut(&g), Err(Error::TooLarge { .. })));
}
