use std::fmt::Write as _;
use std::io::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use imc::orbit::parse_function_spec;
use imc::{analyze, build_graph, communication_classes, default_suite, iterate_orbit, load_operator, oracle_compare, to_dot};
use imc::{Error, OrbitParams, Result};

/// Convergence analysis for imprecise Markov chains.
#[derive(Parser)]
#[command(name = "imc", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Full pipeline; exit code 0 = convergent, 2 = not, 3 = inconclusive.
    Analyze {
        /// JSON model file or `builtin:<name>`.
        model: String,
        #[arg(long)]
        json: bool,
        /// Check the verdict against orbits of all indicators plus this many random functions.
        #[arg(long)]
        suite: Option<usize>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[command(flatten)]
        orbit: OrbitArgs,
    },
    /// Iterate the operator from one function and report the limit cycle.
    Orbit {
        model: String,
        /// `[0,1,0.5]`, `0,1,0.5`, `1_b`, `indicator:b` or `random:<seed>`.
        function: String,
        #[arg(long)]
        json: bool,
        /// Write the full trace as CSV to this path.
        #[arg(long)]
        csv: Option<PathBuf>,
        #[command(flatten)]
        orbit: OrbitArgs,
    },
    /// Upper accessibility graph with its communication classes.
    Graph {
        model: String,
        /// Emit Graphviz DOT.
        #[arg(long)]
        dot: bool,
    },
    /// The recursive decomposition of the state space.
    Decompose {
        model: String,
        #[arg(long)]
        json: bool,
    },
}

#[derive(Args)]
struct OrbitArgs {
    #[arg(long, default_value_t = 1e-9)]
    tolerance: f64,
    #[arg(long, default_value_t = 5000)]
    max_iters: usize,
    #[arg(long, default_value_t = 64)]
    max_period: usize,
    #[arg(long, default_value_t = 200)]
    burn_in: usize,
}

impl OrbitArgs {
    fn params(&self, keep_trace: bool) -> OrbitParams {
        OrbitParams {
            tolerance: self.tolerance,
            burn_in: self.burn_in,
            max_iters: self.max_iters,
            max_period: self.max_period,
            keep_trace,
        }
    }
}

macro_rules! outln {
    ($out:expr, $($arg:tt)*) => {
        {
            let _ = writeln!($out, $($arg)*);
        }
    };
}

fn braces(labels: &[String]) -> String {
    format!("{{{}}}", labels.join(","))
}

fn run(cli: Cli, out: &mut String) -> Result<i32> {
    match cli.command {
        Command::Analyze { model, json, suite, seed, orbit } => {
            let op = load_operator(&model)?;
            let params = orbit.params(false);
            let analysis = analyze(&op, &params)?;
            let evidence = match suite {
                Some(k) => {
                    let functions = default_suite(op.states(), k, seed);
                    Some(oracle_compare(op.as_ref(), &analysis.verdict, &functions, &params)?)
                }
                None => None,
            };
            let report = analysis.report(&model, evidence);
            if json {
                outln!(out, "{}", report.to_json());
            } else {
                out.push_str(&report.render_text());
            }
            Ok(report.exit_code())
        }
        Command::Orbit { model, function, json, csv, orbit } => {
            let op = load_operator(&model)?;
            let f = parse_function_spec(&function, op.states())?;
            let result = iterate_orbit(op.as_ref(), &f, &orbit.params(csv.is_some()))?;
            if let Some(path) = csv {
                std::fs::write(path, result.trace_csv(op.states()).unwrap_or_default())?;
            }
            if json {
                outln!(out, "{}", serde_json::to_string_pretty(&result).expect("orbit result serializes"));
            } else {
                match result.detected_period {
                    Some(p) => outln!(out, "period: {p} (from iteration {})", result.detected_at.unwrap_or(0)),
                    None => outln!(out, "period: none detected within {} iterations", result.iterations),
                }
                outln!(out, "states: {}", op.states().labels().join(","));
                for w in &result.limit_cycle {
                    let row: Vec<String> = w.iter().map(|v| format!("{v:.12}")).collect();
                    outln!(out, "  {}", row.join(","));
                }
                outln!(out, "residual: {:e}", result.residual);
            }
            Ok(0)
        }
        Command::Graph { model, dot } => {
            let op = load_operator(&model)?;
            let g = build_graph(op.as_ref())?;
            let classes = communication_classes(&g);
            if dot {
                out.push_str(&to_dot(&g, &classes));
            } else {
                let st = op.states();
                for (x, y) in g.edges() {
                    outln!(out, "{} -> {}", st.label(x), st.label(y));
                }
                for c in &classes {
                    let period = c.cyclicity.period().map_or("acyclic".to_string(), |p| format!("period {p}"));
                    let kind = if c.is_maximal { "maximal" } else { "transient" };
                    outln!(out, "class {} {kind}, {period}", braces(&st.labels_of(&c.members)));
                }
            }
            Ok(0)
        }
        Command::Decompose { model, json } => {
            let op = load_operator(&model)?;
            let report = analyze(&op, &OrbitParams::default())?.report(&model, None);
            if json {
                outln!(out, "{}", serde_json::to_string_pretty(&report.decomposition).expect("report serializes"));
            } else {
                outln!(out, "depth: {}", report.decomposition.depth);
                for l in &report.decomposition.levels {
                    let maximal: Vec<String> = l.partition.maximal_classes.iter().map(|c| braces(c)).collect();
                    outln!(out, "level {}: domain {}", l.level, braces(&l.domain));
                    outln!(out, "  maximal: {}", maximal.join(" "));
                    outln!(out, "  lower-reached transients: {}", braces(&l.partition.x_t_abs));
                    outln!(out, "  unreached transients: {}", braces(&l.partition.x_t_non));
                }
            }
            Ok(0)
        }
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::new().filter("IMC_LOG")).init();
    let cli = Cli::parse();
    let mut out = String::new();
    let result = run(cli, &mut out);
    // A closed pipe (`imc ... | head`) is not an error worth reporting.
    let _ = std::io::stdout().write_all(out.as_bytes());
    match result {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            match &e {
                Error::IncompleteDecomposition { levels, .. } => {
                    eprintln!("error: {e}");
                    for l in levels {
                        eprintln!("  completed level {} on {}", l.index, braces(l.operator.operator.states().labels()));
                    }
                }
                _ => eprintln!("error: {e}"),
            }
            ExitCode::from(1)
        }
    }
}
