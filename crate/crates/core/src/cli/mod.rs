//! Command-line driver behind the `chac` binary.
//!
//! Exit codes: 0 success, 1 usage error, 2 scenario error, 3 no solution.

pub mod experiment;
pub mod render;
pub mod validate;

use std::io::Write;
use std::path::PathBuf;

use clap::{Parser, Subcommand};

use crate::baseline::{greedy_solve, GreedyResult};
use crate::costgraph::build_graph;
use crate::scenario::{serialize_scenario, Generator, ScenarioMap};
use crate::solver::{solve_graph, SolutionPath, SolverConfig};
use crate::visibility::compute_zo;

pub use experiment::{
    mean_std, run_experiment, select_best, with_visibility, ExperimentError, ExperimentReport,
    ExperimentSpec, RuleKind, RunRecord, ScenarioSource, StatsRow,
};
pub use render::{render_path, RenderError, RenderFormat};
pub use validate::{validate_scenario, ValidationReport};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_SCENARIO: i32 = 2;
pub const EXIT_NO_SOLUTION: i32 = 3;

/// Environment variable capping the number of worker threads.
pub const THREADS_ENV: &str = "CHAC_THREADS";

#[derive(Debug, Parser)]
#[command(
    name = "chac",
    version,
    about = "Bi-criteria ant colony path planning on grid battlefields"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Write a generated scenario.
    Generate {
        /// river, walls or valleys
        generator: Generator,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Output file; stdout when omitted.
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Check a scenario file and report every problem found.
    Validate { file: PathBuf },
    /// Solve one scenario and print the solutions found.
    Solve {
        /// Scenario file, or a generator name with an optional `:seed`.
        scenario: String,
        /// cstr, dstr or greedy
        #[arg(long, default_value = "cstr")]
        rule: RuleKind,
        /// Priority of speed over safety, in (0, 1).
        #[arg(long, default_value_t = 0.9)]
        lambda: f64,
        /// Colony iterations; the scenario family's default when omitted.
        #[arg(long)]
        iterations: Option<usize>,
        /// Ants per iteration; the scenario family's default when omitted.
        #[arg(long)]
        ants: Option<usize>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Override the scenario's observer radius.
        #[arg(long)]
        zo_radius: Option<usize>,
        /// Override the scenario's visibility decay.
        #[arg(long)]
        zo_decay: Option<f64>,
        /// Render the chosen path as ascii or svg.
        #[arg(long)]
        render: Option<RenderFormat>,
        /// Where to write the rendering; stdout when omitted.
        #[arg(long)]
        render_out: Option<PathBuf>,
    },
    /// Repeated seeded runs with summary statistics.
    Experiment {
        /// Scenario file, or a generator name with an optional `:seed`.
        scenario: String,
        #[arg(long, value_delimiter = ',', default_value = "cstr,dstr,greedy")]
        rules: Vec<RuleKind>,
        #[arg(long, value_delimiter = ',', default_value = "0.9,0.1")]
        lambdas: Vec<f64>,
        /// Seeded runs per (rule, lambda) cell.
        #[arg(long, default_value_t = 30)]
        reps: usize,
        #[arg(long)]
        iterations: Option<usize>,
        #[arg(long)]
        ants: Option<usize>,
        /// Base seed; run `k` uses `seed + k`.
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Override the scenario's observer radius.
        #[arg(long)]
        zo_radius: Option<usize>,
        /// Override the scenario's visibility decay.
        #[arg(long)]
        zo_decay: Option<f64>,
        /// Write one CSV line per successful run.
        #[arg(long)]
        csv: Option<PathBuf>,
    },
}

/// Parses `args` (including the program name) and runs the command,
/// returning the process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
        }
    };
    let threads = std::env::var(THREADS_ENV)
        .ok()
        .and_then(|v| v.parse::<usize>().ok());
    let pool = match rayon::ThreadPoolBuilder::new()
        .num_threads(threads.unwrap_or(0))
        .build()
    {
        Ok(p) => p,
        Err(e) => {
            eprintln!("error: cannot start worker threads: {e}");
            return EXIT_USAGE;
        }
    };
    pool.install(|| dispatch(cli.command))
}

fn dispatch(cmd: Command) -> i32 {
    match cmd {
        Command::Generate {
            generator,
            seed,
            output,
        } => {
            let text = serialize_scenario(&generator.generate(seed));
            emit(output.as_ref(), &text)
        }
        Command::Validate { file } => {
            let text = match std::fs::read_to_string(&file) {
                Ok(t) => t,
                Err(e) => {
                    eprintln!("error: cannot read {}: {e}", file.display());
                    return EXIT_SCENARIO;
                }
            };
            let (report, _) = validate_scenario(&text);
            print!("{report}");
            if report.is_ok() {
                EXIT_OK
            } else {
                EXIT_SCENARIO
            }
        }
        Command::Solve {
            scenario,
            rule,
            lambda,
            iterations,
            ants,
            seed,
            zo_radius,
            zo_decay,
            render,
            render_out,
        } => {
            let source = ScenarioSource::parse(&scenario);
            let map = match source.load() {
                Ok(m) => m,
                Err(e) => {
                    eprintln!("error: {e}");
                    return EXIT_SCENARIO;
                }
            };
            let map = match with_visibility(map, zo_radius, zo_decay) {
                Ok(m) => m,
                Err(e) => {
                    eprintln!("error: {e}");
                    return EXIT_USAGE;
                }
            };
            let (def_iter, def_ants) = source.default_effort();
            let cfg = SolverConfig {
                lambda,
                num_iterations: iterations.unwrap_or(def_iter),
                num_ants: ants.unwrap_or(def_ants),
                rng_seed: seed,
                ..Default::default()
            };
            solve_command(&map, rule, &cfg, render, render_out)
        }
        Command::Experiment {
            scenario,
            rules,
            lambdas,
            reps,
            iterations,
            ants,
            seed,
            zo_radius,
            zo_decay,
            csv,
        } => {
            let mut spec = ExperimentSpec::new(ScenarioSource::parse(&scenario));
            spec.zo_radius = zo_radius;
            spec.zo_decay = zo_decay;
            spec.rules = rules;
            spec.lambdas = lambdas;
            spec.repetitions = reps;
            spec.base_seed = seed;
            if let Some(i) = iterations {
                spec.iterations = i;
            }
            if let Some(a) = ants {
                spec.ants = a;
            }
            let report = match run_experiment(&spec) {
                Ok(r) => r,
                Err(e @ ExperimentError::Invalid(_)) => {
                    eprintln!("error: {e}");
                    return EXIT_USAGE;
                }
                Err(e) => {
                    eprintln!("error: {e}");
                    return EXIT_SCENARIO;
                }
            };
            print!("{}", report.table());
            match csv {
                Some(path) => emit(Some(&path), &report.to_csv()),
                None => EXIT_OK,
            }
        }
    }
}

fn solve_command(
    map: &ScenarioMap,
    rule: RuleKind,
    cfg: &SolverConfig,
    render: Option<RenderFormat>,
    render_out: Option<PathBuf>,
) -> i32 {
    let graph = build_graph(map, &map.params().cost_table);
    let zo = compute_zo(map, &map.params().visibility);
    let (solutions, chosen): (Vec<SolutionPath>, Option<SolutionPath>) = match rule {
        RuleKind::Greedy => match greedy_solve(&graph, &zo, &Default::default()) {
            GreedyResult::Solution(s) => (vec![s.clone()], Some(s)),
            GreedyResult::NoSolution(reason) => {
                println!("NO SOLUTION ({reason})");
                return EXIT_NO_SOLUTION;
            }
        },
        RuleKind::Cstr | RuleKind::Dstr => {
            let cfg = SolverConfig {
                rule: if rule == RuleKind::Cstr {
                    crate::solver::TransitionRule::Cstr
                } else {
                    crate::solver::TransitionRule::Dstr
                },
                ..cfg.clone()
            };
            let out = match solve_graph(&graph, &zo, &cfg) {
                Ok(o) => o,
                Err(e) => {
                    eprintln!("error: {e}");
                    return EXIT_USAGE;
                }
            };
            let chosen = select_best(&out.archive, cfg.lambda).cloned();
            (out.archive.solutions().to_vec(), chosen)
        }
    };
    let Some(best) = chosen else {
        println!("NO SOLUTION");
        return EXIT_NO_SOLUTION;
    };
    println!("{} solution(s)", solutions.len());
    println!("{:>12} {:>12} {:>6}", "Ff", "Fs", "cells");
    for s in &solutions {
        let mark = if *s == best { " *" } else { "" };
        println!("{:>12.3} {:>12.3} {:>6}{mark}", s.ff, s.fs, s.nodes.len());
    }
    if let Some(format) = render {
        match render_path(map, &best.nodes, format) {
            Ok(doc) => return emit(render_out.as_ref(), &doc),
            Err(e) => {
                eprintln!("error: {e}");
                return EXIT_SCENARIO;
            }
        }
    }
    EXIT_OK
}

fn emit(path: Option<&PathBuf>, text: &str) -> i32 {
    let res = match path {
        Some(p) => std::fs::write(p, text),
        None => std::io::stdout().write_all(text.as_bytes()),
    };
    match res {
        Ok(()) => EXIT_OK,
        Err(e) => {
            eprintln!("error: cannot write output: {e}");
            EXIT_USAGE
        }
    }
}
