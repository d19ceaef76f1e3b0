//! Batch protocol: repeated seeded runs per (rule, λ), per-run best
//! selection, mean and sample standard deviation, CSV export.

use std::fmt::{self, Write as _};
use std::path::PathBuf;
use std::str::FromStr;

use rayon::prelude::*;
use thiserror::Error;

use crate::baseline::{greedy_solve, GreedyConfig, GreedyResult, NoSolutionReason};
use crate::costgraph::{build_graph, CostGraph};
use crate::scenario::{parse_scenario, Generator, ScenarioError, ScenarioMap};
use crate::solver::{solve_graph, ParetoArchive, SolutionPath, SolverConfig, TransitionRule};
use crate::visibility::{compute_zo, VisibilityConfig, ZoField};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum RuleKind {
    Cstr,
    Dstr,
    Greedy,
}

impl RuleKind {
    pub fn name(self) -> &'static str {
        match self {
            RuleKind::Cstr => "CSTR",
            RuleKind::Dstr => "DSTR",
            RuleKind::Greedy => "GREEDY",
        }
    }

    fn transition(self) -> Option<TransitionRule> {
        match self {
            RuleKind::Cstr => Some(TransitionRule::Cstr),
            RuleKind::Dstr => Some(TransitionRule::Dstr),
            RuleKind::Greedy => None,
        }
    }
}

impl fmt::Display for RuleKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for RuleKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim().to_ascii_lowercase().as_str() {
            "cstr" => Ok(RuleKind::Cstr),
            "dstr" => Ok(RuleKind::Dstr),
            "greedy" => Ok(RuleKind::Greedy),
            other => Err(format!(
                "unknown rule `{other}` (expected cstr, dstr or greedy)"
            )),
        }
    }
}

/// Where the map of an experiment comes from.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ScenarioSource {
    File(PathBuf),
    Generated { generator: Generator, seed: u64 },
}

impl ScenarioSource {
    /// `GEN` or `GEN:SEED` names a generator; anything else is a path.
    pub fn parse(arg: &str) -> Self {
        let (name, seed) = match arg.split_once(':') {
            Some((n, s)) => (n, s.parse::<u64>().ok()),
            None => (arg, Some(0)),
        };
        match (name.parse::<Generator>(), seed) {
            (Ok(generator), Some(seed)) if !std::path::Path::new(arg).exists() => {
                ScenarioSource::Generated { generator, seed }
            }
            _ => ScenarioSource::File(PathBuf::from(arg)),
        }
    }

    pub fn load(&self) -> Result<ScenarioMap, ExperimentError> {
        match self {
            ScenarioSource::File(path) => {
                let text = std::fs::read_to_string(path).map_err(|e| ExperimentError::Io {
                    path: path.clone(),
                    message: e.to_string(),
                })?;
                parse_scenario(&text).map_err(ExperimentError::Scenario)
            }
            ScenarioSource::Generated { generator, seed } => Ok(generator.generate(*seed)),
        }
    }

    /// Iterations and ants suggested for this source.
    pub fn default_effort(&self) -> (usize, usize) {
        match self {
            ScenarioSource::Generated { generator, .. } => generator.default_effort(),
            ScenarioSource::File(_) => (500, 20),
        }
    }
}

impl fmt::Display for ScenarioSource {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ScenarioSource::File(p) => write!(f, "{}", p.display()),
            ScenarioSource::Generated { generator, seed } => write!(f, "{generator}:{seed}"),
        }
    }
}

#[derive(Debug, Error)]
pub enum ExperimentError {
    #[error("cannot read {}: {message}", path.display())]
    Io { path: PathBuf, message: String },
    #[error(transparent)]
    Scenario(ScenarioError),
    #[error("invalid experiment: {0}")]
    Invalid(String),
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentSpec {
    pub scenario: ScenarioSource,
    pub rules: Vec<RuleKind>,
    pub lambdas: Vec<f64>,
    pub repetitions: usize,
    pub iterations: usize,
    pub ants: usize,
    pub base_seed: u64,
    /// Everything else about the colony; λ, rule, effort and seed are
    /// overwritten per run.
    pub solver: SolverConfig,
    pub greedy: GreedyConfig,
    /// Visibility overrides applied on top of the scenario's own settings.
    pub zo_radius: Option<usize>,
    pub zo_decay: Option<f64>,
}

impl ExperimentSpec {
    pub fn new(scenario: ScenarioSource) -> Self {
        let (iterations, ants) = scenario.default_effort();
        Self {
            scenario,
            rules: vec![RuleKind::Cstr, RuleKind::Dstr, RuleKind::Greedy],
            lambdas: vec![0.9, 0.1],
            repetitions: 30,
            iterations,
            ants,
            base_seed: 0,
            solver: SolverConfig::default(),
            greedy: GreedyConfig::default(),
            zo_radius: None,
            zo_decay: None,
        }
    }

    pub fn validate(&self) -> Result<(), ExperimentError> {
        let bad = |m: &str| Err(ExperimentError::Invalid(m.to_string()));
        if self.repetitions == 0 {
            return bad("repetitions must be positive");
        }
        let overrides = VisibilityConfig {
            zo_radius: self.zo_radius.unwrap_or(1),
            zo_decay: self.zo_decay.unwrap_or(1.0),
        };
        overrides.validate().map_err(ExperimentError::Invalid)?;
        if self.rules.is_empty() || self.lambdas.is_empty() {
            return bad("at least one rule and one lambda are required");
        }
        if self.lambdas.iter().any(|l| !(*l > 0.0 && *l < 1.0)) {
            return bad("every lambda must lie in (0, 1)");
        }
        for rule in &self.rules {
            if let Some(t) = rule.transition() {
                self.run_config(t, self.lambdas[0], 0)
                    .validate()
                    .map_err(|e| ExperimentError::Invalid(e.to_string()))?;
            }
        }
        Ok(())
    }

    /// Loads the scenario with the visibility overrides applied.
    pub fn load_map(&self) -> Result<ScenarioMap, ExperimentError> {
        let map = self.scenario.load()?;
        with_visibility(map, self.zo_radius, self.zo_decay).map_err(ExperimentError::Scenario)
    }

    pub fn seed(&self, rep: usize) -> u64 {
        self.base_seed.wrapping_add(rep as u64)
    }

    fn run_config(&self, rule: TransitionRule, lambda: f64, rep: usize) -> SolverConfig {
        SolverConfig {
            lambda,
            rule,
            num_ants: self.ants,
            num_iterations: self.iterations,
            rng_seed: self.seed(rep),
            ..self.solver.clone()
        }
    }
}

/// Replaces the map's visibility radius and decay where given.
pub fn with_visibility(
    map: ScenarioMap,
    zo_radius: Option<usize>,
    zo_decay: Option<f64>,
) -> Result<ScenarioMap, ScenarioError> {
    if zo_radius.is_none() && zo_decay.is_none() {
        return Ok(map);
    }
    let mut params = map.params().clone();
    if let Some(r) = zo_radius {
        params.visibility.zo_radius = r;
    }
    if let Some(k) = zo_decay {
        params.visibility.zo_decay = k;
    }
    map.with_params(params)
}

/// Picks the run's reported solution: lowest `Ff` when speed has priority
/// (λ ≥ 0.5), lowest `Fs` otherwise.
pub fn select_best(archive: &ParetoArchive, lambda: f64) -> Option<&SolutionPath> {
    if lambda >= 0.5 {
        archive.best_speed()
    } else {
        archive.best_safety()
    }
}

/// One repetition that produced a solution.
#[derive(Debug, Clone, PartialEq)]
pub struct RunRecord {
    pub rule: RuleKind,
    pub lambda: f64,
    pub rep: usize,
    pub seed: u64,
    pub ff: f64,
    pub fs: f64,
    pub archive_size: usize,
    pub path_len: usize,
    pub path: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunFailure {
    pub rule: RuleKind,
    pub lambda: f64,
    pub rep: usize,
    pub reason: String,
}

#[derive(Debug, Clone, PartialEq)]
pub struct StatsRow {
    pub rule: RuleKind,
    pub lambda: f64,
    pub best_ff: Option<f64>,
    pub best_fs: Option<f64>,
    pub mean_ff: Option<f64>,
    pub std_ff: Option<f64>,
    pub mean_fs: Option<f64>,
    pub std_fs: Option<f64>,
    pub mean_archive: Option<f64>,
    pub runs: usize,
    pub failures: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentReport {
    pub scenario: String,
    pub rows: Vec<StatsRow>,
    pub records: Vec<RunRecord>,
    pub failures: Vec<RunFailure>,
}

/// Mean and sample (n − 1) standard deviation; a single value has σ = 0.
pub fn mean_std(xs: &[f64]) -> Option<(f64, f64)> {
    if xs.is_empty() {
        return None;
    }
    let n = xs.len() as f64;
    let mean = xs.iter().sum::<f64>() / n;
    if xs.len() == 1 {
        return Some((mean, 0.0));
    }
    let var = xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0);
    Some((mean, var.sqrt()))
}

enum Outcome {
    Found(RunRecord),
    Failed(RunFailure),
}

struct Job {
    rule: RuleKind,
    lambda: f64,
    rep: usize,
}

/// Runs every (rule, λ, repetition) cell. Repetitions run on the current
/// rayon pool; results are gathered in job order so the report does not
/// depend on scheduling.
pub fn run_experiment(spec: &ExperimentSpec) -> Result<ExperimentReport, ExperimentError> {
    spec.validate()?;
    let map = spec.load_map()?;
    let graph = build_graph(&map, &map.params().cost_table);
    let zo = compute_zo(&map, &map.params().visibility);

    let greedy = spec
        .rules
        .contains(&RuleKind::Greedy)
        .then(|| greedy_solve(&graph, &zo, &spec.greedy));

    let mut jobs = Vec::new();
    for &rule in &spec.rules {
        for &lambda in &spec.lambdas {
            for rep in 0..spec.repetitions {
                jobs.push(Job { rule, lambda, rep });
            }
        }
    }

    let outcomes: Vec<Outcome> = jobs
        .par_iter()
        .map(|job| run_job(spec, &graph, &zo, greedy.as_ref(), job))
        .collect();

    let mut records = Vec::new();
    let mut failures = Vec::new();
    for o in outcomes {
        match o {
            Outcome::Found(r) => records.push(r),
            Outcome::Failed(f) => failures.push(f),
        }
    }

    let mut rows = Vec::new();
    for &rule in &spec.rules {
        for &lambda in &spec.lambdas {
            let cell: Vec<&RunRecord> = records
                .iter()
                .filter(|r| r.rule == rule && r.lambda == lambda)
                .collect();
            let ffs: Vec<f64> = cell.iter().map(|r| r.ff).collect();
            let fss: Vec<f64> = cell.iter().map(|r| r.fs).collect();
            let sizes: Vec<f64> = cell.iter().map(|r| r.archive_size as f64).collect();
            let ff = mean_std(&ffs);
            let fs = mean_std(&fss);
            rows.push(StatsRow {
                rule,
                lambda,
                best_ff: ffs.iter().copied().reduce(f64::min),
                best_fs: fss.iter().copied().reduce(f64::min),
                mean_ff: ff.map(|p| p.0),
                std_ff: ff.map(|p| p.1),
                mean_fs: fs.map(|p| p.0),
                std_fs: fs.map(|p| p.1),
                mean_archive: mean_std(&sizes).map(|p| p.0),
                runs: cell.len(),
                failures: failures
                    .iter()
                    .filter(|f| f.rule == rule && f.lambda == lambda)
                    .count(),
            });
        }
    }

    Ok(ExperimentReport {
        scenario: spec.scenario.to_string(),
        rows,
        records,
        failures,
    })
}

fn run_job(
    spec: &ExperimentSpec,
    graph: &CostGraph,
    zo: &ZoField,
    greedy: Option<&GreedyResult>,
    job: &Job,
) -> Outcome {
    let seed = spec.seed(job.rep);
    let fail = |reason: String| {
        Outcome::Failed(RunFailure {
            rule: job.rule,
            lambda: job.lambda,
            rep: job.rep,
            reason,
        })
    };
    let (best, archive_size) = match job.rule.transition() {
        None => match greedy.expect("greedy computed when requested") {
            GreedyResult::Solution(s) => (s.clone(), 1),
            GreedyResult::NoSolution(reason) => return fail(no_solution_text(*reason)),
        },
        Some(rule) => {
            let cfg = spec.run_config(rule, job.lambda, job.rep);
            let out = match solve_graph(graph, zo, &cfg) {
                Ok(o) => o,
                Err(e) => return fail(e.to_string()),
            };
            match select_best(&out.archive, job.lambda) {
                Some(s) => (s.clone(), out.archive.len()),
                None => return fail("no ant reached the target".to_string()),
            }
        }
    };
    Outcome::Found(RunRecord {
        rule: job.rule,
        lambda: job.lambda,
        rep: job.rep,
        seed,
        ff: best.ff,
        fs: best.fs,
        archive_size,
        path_len: best.nodes.len(),
        path: best.nodes,
    })
}

fn no_solution_text(reason: NoSolutionReason) -> String {
    format!("NO SOLUTION ({reason})")
}

impl ExperimentReport {
    /// One line per successful run.
    pub fn to_csv(&self) -> String {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record([
            "rule",
            "lambda",
            "rep",
            "seed",
            "ff",
            "fs",
            "archive_size",
            "path_len",
        ])
        .expect("in-memory write");
        for r in &self.records {
            w.write_record([
                r.rule.name().to_string(),
                r.lambda.to_string(),
                r.rep.to_string(),
                r.seed.to_string(),
                r.ff.to_string(),
                r.fs.to_string(),
                r.archive_size.to_string(),
                r.path_len.to_string(),
            ])
            .expect("in-memory write");
        }
        String::from_utf8(w.into_inner().expect("in-memory flush")).expect("ascii csv")
    }

    pub fn row(&self, rule: RuleKind, lambda: f64) -> Option<&StatsRow> {
        self.rows
            .iter()
            .find(|r| r.rule == rule && r.lambda == lambda)
    }

    /// Human-readable table with one line per (rule, λ).
    pub fn table(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "scenario: {}", self.scenario);
        let _ = writeln!(
            out,
            "{:<7} {:>6} {:>10} {:>10} {:>10} {:>9} {:>10} {:>9} {:>7} {:>5} {:>5}",
            "rule",
            "lambda",
            "best Ff",
            "best Fs",
            "mean Ff",
            "sd Ff",
            "mean Fs",
            "sd Fs",
            "archive",
            "runs",
            "fail"
        );
        for r in &self.rows {
            match (
                r.best_ff, r.best_fs, r.mean_ff, r.std_ff, r.mean_fs, r.std_fs,
            ) {
                (Some(bf), Some(bs), Some(mf), Some(sf), Some(ms), Some(ss)) => {
                    let _ = writeln!(
                        out,
                        "{:<7} {:>6} {:>10.3} {:>10.3} {:>10.3} {:>9.3} {:>10.3} {:>9.3} {:>7.2} {:>5} {:>5}",
                        r.rule.name(),
                        r.lambda,
                        bf,
                        bs,
                        mf,
                        sf,
                        ms,
                        ss,
                        r.mean_archive.unwrap_or(0.0),
                        r.runs,
                        r.failures
                    );
                }
                _ => {
                    let _ = writeln!(
                        out,
                        "{:<7} {:>6} {:>10} {:>7} {:>5}",
                        r.rule.name(),
                        r.lambda,
                        "NO SOLUTION",
                        r.runs,
                        r.failures
                    );
                }
            }
        }
        for f in &self.failures {
            let _ = writeln!(
                out,
                "failed: {} lambda={} rep={}: {}",
                f.rule, f.lambda, f.rep, f.reason
            );
        }
        let _ = writeln!(
            out,
            "per run: lowest Ff if lambda >= 0.5, else lowest Fs; sd is the sample (n-1) standard deviation"
        );
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sample_std() {
        assert_eq!(mean_std(&[]), None);
        assert_eq!(mean_std(&[4.0]), Some((4.0, 0.0)));
        let (m, s) = mean_std(&[2.0, 4.0, 4.0, 4.0, 5.0, 5.0, 7.0, 9.0]).unwrap();
        assert_eq!(m, 5.0);
        assert!((s - (32.0f64 / 7.0).sqrt()).abs() < 1e-12);
    }

    #[test]
    fn source_parsing() {
        assert_eq!(
            ScenarioSource::parse("walls:7"),
            ScenarioSource::Generated {
                generator: Generator::Walls,
                seed: 7
            }
        );
        assert_eq!(
            ScenarioSource::parse("river"),
            ScenarioSource::Generated {
                generator: Generator::RiverForest,
                seed: 0
            }
        );
        assert_eq!(
            ScenarioSource::parse("maps/a.map"),
            ScenarioSource::File(PathBuf::from("maps/a.map"))
        );
    }

    #[test]
    fn rule_names() {
        for r in [RuleKind::Cstr, RuleKind::Dstr, RuleKind::Greedy] {
            assert_eq!(r.name().parse::<RuleKind>(), Ok(r));
        }
        assert!("aco".parse::<RuleKind>().is_err());
    }
}
