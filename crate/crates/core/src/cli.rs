//! Command-line plumbing: DIMACS input, instance generation, dispatch and
//! JSON reports.

use std::fmt::Write as _;
use std::io::Write as _;
use std::path::PathBuf;
use std::time::Instant;

use serde::Serialize;
use thiserror::Error;

use crate::dualcut::{dual_binary_search, dual_cut, DualConfig, DualIterationRecord, DualOutcome, DualProbe};
use crate::error::Error;
use crate::exact::exact_maxflow;
use crate::generate::{erdos_renyi, parallel_paths, random_connected, rng};
use crate::graph::{max_congestion, FlowVector, Graph};
use crate::improved::ImprovedParams;
use crate::mw::{
    binary_search_maxflow, run_flow_algorithm, FlowAlgorithm, FlowConfig, IterationRecord,
    MwOutcome, ProbeRecord,
};

/// Exact effective resistances are traced only up to this many vertices.
pub const PHI_TRACE_LIMIT: usize = 40;
/// Congestion slack used for the `feasible` flag.
pub const FEASIBILITY_SLACK: f64 = 1e-6;

pub const EXIT_OK: i32 = 0;
pub const EXIT_PARSE: i32 = 2;
pub const EXIT_FAIL: i32 = 3;
pub const EXIT_DISCONNECTED: i32 = 4;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Algorithm {
    Simple,
    Improved,
    Cut,
    Exact,
}

impl Algorithm {
    pub fn name(self) -> &'static str {
        match self {
            Algorithm::Simple => "simple",
            Algorithm::Improved => "improved",
            Algorithm::Cut => "cut",
            Algorithm::Exact => "exact",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub algorithm: Algorithm,
    pub epsilon: f64,
    /// Run at this value instead of searching.
    pub flow_value: Option<f64>,
    pub seed: u64,
    pub instrument: bool,
    pub output_path: Option<PathBuf>,
    pub trace_path: Option<PathBuf>,
    /// Width override for the improved algorithm.
    pub rho: Option<f64>,
}

impl RunConfig {
    pub fn new(algorithm: Algorithm, epsilon: f64) -> Self {
        Self {
            algorithm,
            epsilon,
            flow_value: None,
            seed: 0,
            instrument: false,
            output_path: None,
            trace_path: None,
            rho: None,
        }
    }

    pub fn validate(&self) -> Result<(), Error> {
        let upper = match self.algorithm {
            Algorithm::Simple | Algorithm::Improved => 0.5,
            Algorithm::Cut => 1.0 / 7.0,
            Algorithm::Exact => return Ok(()),
        };
        if !(self.epsilon > 0.0 && self.epsilon < upper) {
            return Err(Error::InvalidParameter(format!(
                "epsilon must lie in (0, {upper:.4}) for {}, got {}",
                self.algorithm.name(),
                self.epsilon
            )));
        }
        if let Some(f) = self.flow_value {
            if !(f > 0.0 && f.is_finite()) {
                return Err(Error::InvalidParameter(format!("flow value must be positive, got {f}")));
            }
        }
        Ok(())
    }
}

/// One JSON object per run. Every key is always present.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunReport {
    pub algorithm: Algorithm,
    pub epsilon: f64,
    pub n: usize,
    pub m: usize,
    /// Value of the returned flow.
    pub flow_value_found: Option<f64>,
    /// Target value of the terminal (succeeding) run.
    pub target_value: Option<f64>,
    /// `(1-ε)²/(1+ε)` times the target value.
    pub guarantee: Option<f64>,
    pub feasible: Option<bool>,
    pub max_congestion: Option<f64>,
    pub cut_capacity: Option<f64>,
    pub cut_source_side: Option<Vec<usize>>,
    pub iterations: Option<usize>,
    pub oracle_calls: Option<usize>,
    pub linear_solves: Option<usize>,
    pub probes: Option<usize>,
    pub forbidden_edges: Option<usize>,
    pub forbidden_capacity: Option<f64>,
    pub checks: Option<usize>,
    pub violations: Option<usize>,
    pub wall_ms: f64,
    pub error: Option<String>,
}

impl RunReport {
    fn empty(config: &RunConfig, g: &Graph) -> Self {
        Self {
            algorithm: config.algorithm,
            epsilon: config.epsilon,
            n: g.n(),
            m: g.m(),
            flow_value_found: None,
            target_value: None,
            guarantee: None,
            feasible: None,
            max_congestion: None,
            cut_capacity: None,
            cut_source_side: None,
            iterations: None,
            oracle_calls: None,
            linear_solves: None,
            probes: None,
            forbidden_edges: None,
            forbidden_capacity: None,
            checks: None,
            violations: None,
            wall_ms: 0.0,
            error: None,
        }
    }

    fn set_flow(&mut self, g: &Graph, flow: &FlowVector, value: f64) {
        let cong = max_congestion(g, flow);
        self.flow_value_found = Some(value);
        self.max_congestion = Some(cong);
        self.feasible = Some(cong <= 1.0 + FEASIBILITY_SLACK);
    }
}

/// A line of the JSON-lines trace.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum TraceLine {
    Probe(ProbeRecord),
    Iteration(IterationRecord),
    DualProbe(DualProbe),
    DualIteration(DualIterationRecord),
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunResult {
    pub report: RunReport,
    pub trace: Vec<TraceLine>,
    pub exit_code: i32,
}

fn exit_code_for(err: &Error) -> i32 {
    match err {
        Error::Disconnected => EXIT_DISCONNECTED,
        Error::InvalidParameter(_) => EXIT_PARSE,
        _ => EXIT_FAIL,
    }
}

/// Runs the configured algorithm on `g`.
pub fn run(config: &RunConfig, g: &Graph) -> RunResult {
    let start = Instant::now();
    let mut report = RunReport::empty(config, g);
    let mut trace = Vec::new();
    let outcome = config
        .validate()
        .and_then(|_| dispatch(config, g, &mut report, &mut trace));
    let exit_code = match outcome {
        Ok(code) => code,
        Err(e) => {
            report.error = Some(e.to_string());
            exit_code_for(&e)
        }
    };
    report.wall_ms = start.elapsed().as_secs_f64() * 1e3;
    RunResult {
        report,
        trace,
        exit_code,
    }
}

fn dispatch(
    config: &RunConfig,
    g: &Graph,
    report: &mut RunReport,
    trace: &mut Vec<TraceLine>,
) -> Result<i32, Error> {
    let eps = config.epsilon;
    let record = config.trace_path.is_some();
    match config.algorithm {
        Algorithm::Exact => {
            let r = exact_maxflow(g);
            report.set_flow(g, &r.flow, r.value as f64);
            report.cut_capacity = Some(r.mincut.capacity);
            report.cut_source_side = Some(r.mincut.source_side().collect());
            if !g.is_st_connected() {
                return Err(Error::Disconnected);
            }
            Ok(EXIT_OK)
        }
        Algorithm::Simple | Algorithm::Improved => {
            let mut fc = match config.algorithm {
                Algorithm::Simple => FlowConfig::simple(eps),
                _ => FlowConfig {
                    algorithm: FlowAlgorithm::Improved(ImprovedParams { rho: config.rho }),
                    ..FlowConfig::simple(eps)
                },
            };
            fc.instrument = config.instrument;
            fc.record_history = record;
            fc.phi_trace = config.instrument
                && config.algorithm == Algorithm::Improved
                && g.n() <= PHI_TRACE_LIMIT;
            if let Some(value) = config.flow_value {
                if !g.is_st_connected() {
                    return Err(Error::Disconnected);
                }
                let run = run_flow_algorithm(g, value, &fc)?;
                let mw = &run.mw;
                report.target_value = Some(value);
                report.guarantee = Some(guarantee(eps, value));
                report.iterations = Some(mw.iterations);
                report.oracle_calls = Some(mw.oracle_calls);
                report.linear_solves = Some(mw.linear_solves);
                report.checks = Some(mw.log.checks);
                report.violations = Some(mw.log.violations.len());
                if let Some(x) = &run.improved {
                    report.forbidden_edges = Some(x.forbidden.len());
                    report.forbidden_capacity = Some(x.forbidden_capacity);
                }
                trace.extend(mw.history.iter().copied().map(TraceLine::Iteration));
                match &mw.outcome {
                    MwOutcome::Feasible { flow, value } => {
                        report.set_flow(g, flow, *value);
                        Ok(EXIT_OK)
                    }
                    MwOutcome::Fail { iteration, reason } => {
                        report.error = Some(format!("fail at iteration {iteration}: {reason:?}"));
                        Ok(EXIT_FAIL)
                    }
                }
            } else {
                let out = binary_search_maxflow(g, &fc)?;
                report.set_flow(g, &out.flow, out.value);
                report.target_value = Some(out.target);
                report.guarantee = Some(guarantee(eps, out.target));
                report.iterations = Some(out.iterations);
                report.oracle_calls = Some(out.oracle_calls);
                report.linear_solves = Some(out.linear_solves);
                report.probes = Some(out.probes.len());
                report.checks = Some(out.log.checks);
                report.violations = Some(out.log.violations.len());
                if let Some(x) = &out.improved {
                    report.forbidden_edges = Some(x.forbidden.len());
                    report.forbidden_capacity = Some(x.forbidden_capacity);
                }
                trace.extend(out.probes.iter().cloned().map(TraceLine::Probe));
                trace.extend(out.history.iter().copied().map(TraceLine::Iteration));
                Ok(EXIT_OK)
            }
        }
        Algorithm::Cut => {
            let dc = DualConfig {
                eps,
                instrument: config.instrument,
                record_history: record,
            };
            if let Some(value) = config.flow_value {
                let run = dual_cut(g, value, &dc)?;
                report.target_value = Some(value);
                report.iterations = Some(run.iterations);
                report.linear_solves = Some(run.linear_solves);
                report.checks = Some(run.log.checks);
                report.violations = Some(run.log.violations.len());
                trace.extend(run.history.iter().copied().map(TraceLine::DualIteration));
                match run.outcome {
                    DualOutcome::Cut(c) => {
                        report.cut_capacity = Some(c.capacity);
                        report.cut_source_side = Some(c.cut.source_side().collect());
                        Ok(EXIT_OK)
                    }
                    DualOutcome::Fail => {
                        report.error = Some(format!("no cut below {} found", value / (1.0 - 7.0 * eps)));
                        Ok(EXIT_FAIL)
                    }
                }
            } else {
                let out = dual_binary_search(g, &dc)?;
                report.target_value = Some(out.target);
                report.cut_capacity = Some(out.cut.capacity);
                report.cut_source_side = Some(out.cut.cut.source_side().collect());
                report.iterations = Some(out.iterations);
                report.linear_solves = Some(out.linear_solves);
                report.probes = Some(out.probes.len());
                report.checks = Some(out.log.checks);
                report.violations = Some(out.log.violations.len());
                trace.extend(out.probes.into_iter().map(TraceLine::DualProbe));
                Ok(EXIT_OK)
            }
        }
    }
}

/// `(1-ε)²/(1+ε) · F`.
pub fn guarantee(eps: f64, value: f64) -> f64 {
    (1.0 - eps).powi(2) / (1.0 + eps) * value
}

pub fn report_json(report: &RunReport) -> String {
    serde_json::to_string_pretty(report).expect("reports serialize")
}

pub fn write_trace(path: &std::path::Path, trace: &[TraceLine]) -> std::io::Result<()> {
    let mut out = std::io::BufWriter::new(std::fs::File::create(path)?);
    for line in trace {
        serde_json::to_writer(&mut out, line)?;
        out.write_all(b"\n")?;
    }
    out.flush()
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("line {line}: missing problem line")]
    MissingProblemLine { line: usize },
    #[error("line {line}: malformed problem line")]
    MalformedProblemLine { line: usize },
    #[error("line {line}: second problem line")]
    DuplicateProblemLine { line: usize },
    #[error("line {line}: missing source node line")]
    MissingSource { line: usize },
    #[error("line {line}: missing sink node line")]
    MissingSink { line: usize },
    #[error("line {line}: malformed node line")]
    MalformedNode { line: usize },
    #[error("line {line}: malformed arc line")]
    MalformedArc { line: usize },
    #[error("line {line}: capacity {text:?} is not a positive integer")]
    InvalidCapacity { line: usize, text: String },
    #[error("line {line}: vertex id {id} outside 1..={n}")]
    VertexOutOfRange { line: usize, id: String, n: usize },
    #[error("line {line}: unknown line type")]
    UnknownLine { line: usize },
    #[error("line {line}: problem line declares {declared} arcs, found {found}")]
    ArcCountMismatch { line: usize, declared: usize, found: usize },
    #[error("line {line}: {message}")]
    InvalidGraph { line: usize, message: String },
}

/// Parses a DIMACS max-flow instance. Arcs become undirected edges;
/// repeated arcs are kept as parallel edges.
pub fn parse_dimacs(text: &str) -> Result<Graph, ParseError> {
    let mut header: Option<(usize, usize)> = None;
    let mut source: Option<usize> = None;
    let mut sink: Option<usize> = None;
    let mut edges = Vec::new();
    let mut last = 0;
    let vertex = |tok: Option<&str>, n: usize, line: usize| -> Result<usize, ParseError> {
        let tok = tok.unwrap_or("");
        match tok.parse::<usize>() {
            Ok(id) if (1..=n).contains(&id) => Ok(id - 1),
            _ => Err(ParseError::VertexOutOfRange {
                line,
                id: tok.to_string(),
                n,
            }),
        }
    };
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        last = line;
        let mut tok = raw.split_whitespace();
        let Some(kind) = tok.next() else { continue };
        match kind {
            "c" => {}
            "p" => {
                if header.is_some() {
                    return Err(ParseError::DuplicateProblemLine { line });
                }
                let fields: Vec<&str> = tok.collect();
                let parsed = match fields.as_slice() {
                    ["max", n, m] => n.parse().ok().zip(m.parse().ok()),
                    _ => None,
                };
                header = Some(parsed.ok_or(ParseError::MalformedProblemLine { line })?);
            }
            "n" => {
                let (n, _) = header.ok_or(ParseError::MissingProblemLine { line })?;
                let v = vertex(tok.next(), n, line)?;
                match (tok.next(), tok.next()) {
                    (Some("s"), None) => source = Some(v),
                    (Some("t"), None) => sink = Some(v),
                    _ => return Err(ParseError::MalformedNode { line }),
                }
            }
            "a" => {
                let (n, _) = header.ok_or(ParseError::MissingProblemLine { line })?;
                let u = vertex(tok.next(), n, line)?;
                let v = vertex(tok.next(), n, line)?;
                let cap_text = tok.next().ok_or(ParseError::MalformedArc { line })?;
                if tok.next().is_some() {
                    return Err(ParseError::MalformedArc { line });
                }
                let cap = match cap_text.parse::<u64>() {
                    Ok(c) if c > 0 => c,
                    _ => {
                        return Err(ParseError::InvalidCapacity {
                            line,
                            text: cap_text.to_string(),
                        })
                    }
                };
                edges.push((u, v, cap, line));
            }
            _ => return Err(ParseError::UnknownLine { line }),
        }
    }
    let (n, m) = header.ok_or(ParseError::MissingProblemLine { line: last })?;
    let s = source.ok_or(ParseError::MissingSource { line: last })?;
    let t = sink.ok_or(ParseError::MissingSink { line: last })?;
    if edges.len() != m {
        return Err(ParseError::ArcCountMismatch {
            line: last,
            declared: m,
            found: edges.len(),
        });
    }
    if let Some(&(_, _, _, line)) = edges.iter().find(|e| e.0 == e.1) {
        return Err(ParseError::InvalidGraph {
            line,
            message: "self-loop".into(),
        });
    }
    Graph::new(n, edges.iter().map(|&(u, v, c, _)| (u, v, c)), s, t).map_err(|e| {
        ParseError::InvalidGraph {
            line: last,
            message: e.to_string(),
        }
    })
}

pub fn write_dimacs(g: &Graph) -> String {
    let mut out = String::new();
    writeln!(out, "p max {} {}", g.n(), g.m()).unwrap();
    writeln!(out, "n {} s", g.s() + 1).unwrap();
    writeln!(out, "n {} t", g.t() + 1).unwrap();
    for e in g.edges() {
        writeln!(out, "a {} {} {}", e.tail + 1, e.head + 1, e.capacity).unwrap();
    }
    out
}

/// Builds an instance from `family:key=value,...`:
/// `random:n=20,m=40`, `er:n=20,p=0.2` or `paths:k=8`.
pub fn generate_instance(desc: &str, seed: u64) -> Result<Graph, Error> {
    let bad = |msg: &str| Error::InvalidParameter(format!("generator {desc:?}: {msg}"));
    let (family, params) = desc.split_once(':').unwrap_or((desc, ""));
    let mut kv = std::collections::HashMap::new();
    for part in params.split(',').filter(|p| !p.is_empty()) {
        let (k, v) = part.split_once('=').ok_or_else(|| bad("expected key=value"))?;
        kv.insert(k.trim(), v.trim());
    }
    let int = |k: &str| -> Result<usize, Error> {
        kv.get(k)
            .ok_or_else(|| bad(&format!("missing {k}")))?
            .parse()
            .map_err(|_| bad(&format!("{k} is not an integer")))
    };
    let mut r = rng(seed);
    match family {
        "random" => random_connected(int("n")?, int("m")?, &mut r),
        "er" => {
            let p: f64 = kv
                .get("p")
                .ok_or_else(|| bad("missing p"))?
                .parse()
                .map_err(|_| bad("p is not a number"))?;
            erdos_renyi(int("n")?, p, &mut r)
        }
        "paths" => parallel_paths(int("k")?),
        _ => Err(bad("unknown family")),
    }
}
