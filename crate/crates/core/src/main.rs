use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;

use elecflow::cli::{
    generate_instance, parse_dimacs, report_json, run, write_dimacs, write_trace, Algorithm,
    RunConfig, EXIT_PARSE,
};

/// Approximate maximum flow and minimum cut with electrical flows.
#[derive(Debug, Parser)]
#[command(version)]
struct Args {
    /// DIMACS max-flow instance; omit when using --gen
    input: Option<PathBuf>,

    #[arg(long, value_enum, default_value = "simple")]
    algorithm: Algorithm,

    #[arg(long, default_value_t = 0.1)]
    epsilon: f64,

    /// Run once at this flow value instead of searching
    #[arg(long)]
    flow_value: Option<f64>,

    /// Seed for --gen
    #[arg(long, default_value_t = 0)]
    seed: u64,

    /// Check the analytic invariants while running
    #[arg(long)]
    instrument: bool,

    /// Generate an instance: random:n=20,m=40 | er:n=20,p=0.2 | paths:k=8
    #[arg(long, value_name = "FAMILY:PARAMS")]
    gen: Option<String>,

    /// Write the JSON report here instead of stdout
    #[arg(long)]
    output: Option<PathBuf>,

    /// Write per-iteration records as JSON lines
    #[arg(long)]
    trace: Option<PathBuf>,

    /// Save the instance in DIMACS format
    #[arg(long)]
    write_instance: Option<PathBuf>,

    /// Width threshold override for the improved algorithm
    #[arg(long)]
    rho: Option<f64>,
}

fn fail(msg: impl std::fmt::Display, code: i32) -> ExitCode {
    eprintln!("error: {msg}");
    ExitCode::from(code as u8)
}

fn main() -> ExitCode {
    let args = Args::parse();
    let graph = match (&args.input, &args.gen) {
        (Some(path), None) => {
            let text = match std::fs::read_to_string(path) {
                Ok(t) => t,
                Err(e) => return fail(format!("{}: {e}", path.display()), EXIT_PARSE),
            };
            match parse_dimacs(&text) {
                Ok(g) => g,
                Err(e) => return fail(format!("{}: {e}", path.display()), EXIT_PARSE),
            }
        }
        (None, Some(desc)) => match generate_instance(desc, args.seed) {
            Ok(g) => g,
            Err(e) => return fail(e, EXIT_PARSE),
        },
        _ => return fail("give exactly one of an input file or --gen", EXIT_PARSE),
    };
    if let Some(path) = &args.write_instance {
        if let Err(e) = std::fs::write(path, write_dimacs(&graph)) {
            return fail(format!("{}: {e}", path.display()), 1);
        }
    }

    let config = RunConfig {
        algorithm: args.algorithm,
        epsilon: args.epsilon,
        flow_value: args.flow_value,
        seed: args.seed,
        instrument: args.instrument,
        output_path: args.output.clone(),
        trace_path: args.trace.clone(),
        rho: args.rho,
    };
    let result = run(&config, &graph);
    let json = report_json(&result.report);
    match &args.output {
        Some(path) => {
            if let Err(e) = std::fs::write(path, json + "\n") {
                return fail(format!("{}: {e}", path.display()), 1);
            }
        }
        None => println!("{json}"),
    }
    if let Some(path) = &args.trace {
        if let Err(e) = write_trace(path, &result.trace) {
            return fail(format!("{}: {e}", path.display()), 1);
        }
    }
    if let Some(err) = &result.report.error {
        eprintln!("error: {err}");
    }
    ExitCode::from(result.exit_code as u8)
}
