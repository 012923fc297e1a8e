//! Command-line front end for the structural observability toolkit.
//!
//! Exit codes: 0 success/observable, 3 structurally unobservable (a verdict,
//! not a failure), 2 input error, 1 internal error.

use std::collections::HashSet;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use obsnet::graph::DiGraph;
use obsnet::numeric::{self, DEFAULT_RANK_TOLERANCE};
use obsnet::observability::{self, FailedCondition};
use obsnet::product::cartesian_product;
use obsnet::{dot, report, structure};

const EXIT_INTERNAL: u8 = 1;
const EXIT_INPUT: u8 = 2;
const EXIT_UNOBSERVABLE: u8 = 3;

#[derive(Parser)]
#[command(name = "obsnet", version, about = "Structural observability of Cartesian product networks")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Table,
}

#[derive(Subcommand)]
enum Command {
    /// Full structural analysis: SCCs, parents, matching, observer plan
    Analyze {
        path: PathBuf,
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
        /// Write a DOT rendering with parent-SCC nodes highlighted
        #[arg(long)]
        dot: Option<PathBuf>,
    },
    /// Cartesian product of two graphs
    Product {
        path1: PathBuf,
        path2: PathBuf,
        /// Output graph JSON path (stdout if omitted)
        #[arg(short, long)]
        output: Option<PathBuf>,
        #[arg(long)]
        dot: Option<PathBuf>,
    },
    /// Observer plan for a graph
    Observers {
        path: PathBuf,
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
    },
    /// Check structural observability of a given observer set
    Check {
        path: PathBuf,
        /// Comma-separated observer node labels
        #[arg(long, value_delimiter = ',', required = true)]
        observers: Vec<String>,
    },
    /// Compare factors with their product: recovery report
    VerifyProduct { path1: PathBuf, path2: PathBuf },
    /// Numeric rank cross-validation over random weight realizations
    NumericCheck {
        path: PathBuf,
        #[arg(long, value_delimiter = ',', required = true)]
        observers: Vec<String>,
        /// Number of seeds to test (seeds are seed, seed+1, ...)
        #[arg(long, default_value_t = 10)]
        seeds: u64,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long, default_value_t = DEFAULT_RANK_TOLERANCE)]
        tol: f64,
    },
    /// Monte-Carlo least-squares estimation on a random realization
    Simulate {
        path: PathBuf,
        #[arg(long, value_delimiter = ',', required = true)]
        observers: Vec<String>,
        #[arg(long, default_value_t = 100)]
        trials: usize,
        #[arg(long, default_value_t = 50)]
        steps: usize,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long, default_value_t = 5.0)]
        x0_range: f64,
        #[arg(long, default_value_t = 0.05)]
        process_std: f64,
        #[arg(long, default_value_t = 0.05)]
        meas_std: f64,
        /// Keep A as drawn instead of rescaling to spectral radius > 1
        #[arg(long)]
        no_unstable: bool,
        /// Write `step,msee` rows for external plotting
        #[arg(long)]
        csv: Option<PathBuf>,
    },
}

fn load_graph(path: &Path) -> Result<DiGraph, u8> {
    let text = fs::read_to_string(path).map_err(|e| {
        eprintln!("error: cannot read {}: {e}", path.display());
        EXIT_INPUT
    })?;
    DiGraph::parse(&text).map_err(|e| {
        eprintln!("error: {}: {e}", path.display());
        EXIT_INPUT
    })
}

fn resolve_observers(g: &DiGraph, labels: &[String]) -> Result<Vec<usize>, u8> {
    let mut out = Vec::with_capacity(labels.len());
    for l in labels {
        let l = l.trim();
        match g.node_by_label(l) {
            Some(i) => out.push(i),
            None => {
                eprintln!("error: unknown observer label `{l}`");
                return Err(EXIT_INPUT);
            }
        }
    }
    out.sort_unstable();
    out.dedup();
    Ok(out)
}

fn write_file(path: &Path, content: &str) -> Result<(), u8> {
    fs::write(path, content).map_err(|e| {
        eprintln!("error: cannot write {}: {e}", path.display());
        EXIT_INPUT
    })
}

fn parent_scc_nodes(g: &DiGraph) -> HashSet<usize> {
    let d = structure::scc_decompose(g);
    let p = structure::classify_parents(g, &d);
    p.parent_sccs.into_iter().flatten().collect()
}

fn warn_if_disconnected(g: &DiGraph, what: &str) {
    if !g.is_connected() {
        eprintln!("warning: {what} is weakly disconnected; product-level formulas assume connected factors");
    }
}

fn run(cli: Cli) -> Result<u8, u8> {
    match cli.command {
        Command::Analyze { path, format, dot: dot_path } => {
            let g = load_graph(&path)?;
            warn_if_disconnected(&g, "input graph");
            let r = report::analyze(&g);
            match format {
                Format::Json => println!("{}", serde_json::to_string_pretty(&r).unwrap()),
                Format::Table => print!("{}", report::render_table(&r)),
            }
            if let Some(p) = dot_path {
                write_file(&p, &dot::graph_to_dot(&g, &parent_scc_nodes(&g)))?;
            }
            Ok(0)
        }
        Command::Product { path1, path2, output, dot: dot_path } => {
            let g1 = load_graph(&path1)?;
            let g2 = load_graph(&path2)?;
            let p = cartesian_product(&g1, &g2).map_err(|e| {
                eprintln!("error: {e}");
                EXIT_INPUT
            })?;
            let json = p.graph.to_json_string();
            match output {
                Some(path) => write_file(&path, &json)?,
                None => println!("{json}"),
            }
            if let Some(path) = dot_path {
                write_file(&path, &dot::product_to_dot(&p, &parent_scc_nodes(&p.graph)))?;
            }
            Ok(0)
        }
        Command::Observers { path, format } => {
            let g = load_graph(&path)?;
            warn_if_disconnected(&g, "input graph");
            let r = report::analyze(&g);
            match format {
                Format::Json => {
                    println!("{}", serde_json::to_string_pretty(&r.observer_plan).unwrap())
                }
                Format::Table => {
                    println!("observers: [{}]", r.observer_plan.observers.join(", "));
                    for entry in &r.observer_plan.reasons {
                        println!("  {} <- {}", entry.node, entry.tags.join(", "));
                    }
                }
            }
            Ok(0)
        }
        Command::Check { path, observers } => {
            let g = load_graph(&path)?;
            let obs = resolve_observers(&g, &observers)?;
            let v = observability::check_observable(&g, &obs).map_err(|e| {
                eprintln!("error: {e}");
                EXIT_INPUT
            })?;
            match v.failed_condition {
                None => {
                    println!("{{\"observable\": true}}");
                    Ok(0)
                }
                Some(FailedCondition::OutputConnectivity { witness }) => {
                    println!(
                        "{{\"observable\": false, \"failed_condition\": \"OutputConnectivity\", \"witness\": \"{}\"}}",
                        g.label(witness)
                    );
                    Ok(EXIT_UNOBSERVABLE)
                }
                Some(FailedCondition::SpanningDeficiency { uncovered }) => {
                    println!(
                        "{{\"observable\": false, \"failed_condition\": \"SpanningDeficiency\", \"uncovered\": {uncovered}}}"
                    );
                    Ok(EXIT_UNOBSERVABLE)
                }
            }
        }
        Command::VerifyProduct { path1, path2 } => {
            let g1 = load_graph(&path1)?;
            let g2 = load_graph(&path2)?;
            warn_if_disconnected(&g1, "factor 1");
            warn_if_disconnected(&g2, "factor 2");
            let r = observability::verify_product_recovery(&g1, &g2).map_err(|e| {
                eprintln!("error: {e}");
                EXIT_INPUT
            })?;
            println!("{}", serde_json::to_string_pretty(&r).unwrap());
            Ok(0)
        }
        Command::NumericCheck { path, observers, seeds, seed, tol } => {
            let g = load_graph(&path)?;
            let obs = resolve_observers(&g, &observers)?;
            let seed_list: Vec<u64> = (seed..seed + seeds).collect();
            let r = numeric::cross_validate(&g, &obs, &seed_list, tol).map_err(|e| {
                eprintln!("error: {e}");
                EXIT_INTERNAL
            })?;
            println!("{}", serde_json::to_string_pretty(&r).unwrap());
            let structural = r.entries.first().map(|e| e.structural_observable).unwrap_or(false);
            Ok(if structural { 0 } else { EXIT_UNOBSERVABLE })
        }
        Command::Simulate {
            path,
            observers,
            trials,
            steps,
            seed,
            x0_range,
            process_std,
            meas_std,
            no_unstable,
            csv,
        } => {
            let g = load_graph(&path)?;
            let obs = resolve_observers(&g, &observers)?;
            let verdict = observability::check_observable(&g, &obs).map_err(|e| {
                eprintln!("error: {e}");
                EXIT_INPUT
            })?;
            if !verdict.observable {
                eprintln!("error: observer set is structurally unobservable; nothing to simulate");
                return Ok(EXIT_UNOBSERVABLE);
            }
            let r = numeric::realize_weights(&g, &obs, seed, !no_unstable).map_err(|e| {
                eprintln!("error: {e}");
                EXIT_INTERNAL
            })?;
            for w in &r.warnings {
                eprintln!("warning: {w}");
            }
            let trace = numeric::simulate_estimation(
                &r, trials, steps, x0_range, process_std, meas_std, seed,
            )
            .map_err(|e| {
                eprintln!("error: {e}");
                EXIT_INTERNAL
            })?;
            if let Some(path) = csv {
                let mut body = String::from("step,msee\n");
                for (i, v) in trace.msee.iter().enumerate() {
                    body.push_str(&format!("{i},{v}\n"));
                }
                write_file(&path, &body)?;
            }
            let summary = serde_json::json!({
                "schema_version": report::SCHEMA_VERSION,
                "n": g.n(),
                "observers": obs.iter().map(|&o| g.label(o)).collect::<Vec<_>>(),
                "spectral_radius": r.spectral_radius,
                "trials": trace.trials,
                "steps": trace.steps,
                "msee_first": trace.msee.first(),
                "msee_last": trace.msee.last(),
                "msee_max": trace.msee.iter().cloned().fold(f64::NAN, f64::max),
            });
            println!("{}", serde_json::to_string_pretty(&summary).unwrap());
            Ok(0)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(code) => ExitCode::from(code),
    }
}
