//! The CHAC colony: an Ant Colony System with one pheromone matrix and one
//! heuristic per objective.
//!
//! Every iteration each ant walks from the unit to the target choosing the
//! next cell with the combined or the dominance transition rule, applying a
//! local pheromone update on every edge it takes. Complete paths are
//! evaluated on both objectives and offered to a Pareto archive that
//! persists for the whole run; once all ants are done, every archived path
//! makes a global deposit.

mod archive;
mod heuristics;
mod path;
mod pheromone;
mod transition;

pub use archive::ParetoArchive;
pub use heuristics::{heuristic_f, heuristic_s, heuristic_value, HeuristicWeights, TermWeights};
pub use path::{evaluate_path, validate_path, EvaluationWeights, PathError};
pub use pheromone::{PheromoneEvent, PheromoneField};
pub use transition::{
    beats, cstr_choose, cstr_probabilities, cstr_score, dominance_costs, dominance_counts,
    dominates, dstr_choose, dstr_probabilities, DeadEnd, Exponents, Orientation,
};

use std::fmt;
use std::str::FromStr;
use std::time::{Duration, Instant};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::costgraph::{build_graph, CostGraph, EdgeId, DEGREE};
use crate::scenario::ScenarioMap;
use crate::visibility::{compute_zo, ZoField};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum TransitionRule {
    /// Combined state transition rule.
    Cstr,
    /// Dominance state transition rule.
    Dstr,
}

impl fmt::Display for TransitionRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            TransitionRule::Cstr => "CSTR",
            TransitionRule::Dstr => "DSTR",
        })
    }
}

impl FromStr for TransitionRule {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "cstr" => Ok(TransitionRule::Cstr),
            "dstr" => Ok(TransitionRule::Dstr),
            _ => Err(format!("unknown transition rule `{s}`")),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SolverConfig {
    pub alpha: f64,
    pub beta: f64,
    pub rho: f64,
    pub q0: f64,
    /// Priority of speed over safety, strictly inside (0, 1).
    pub lambda: f64,
    pub num_ants: usize,
    pub num_iterations: usize,
    pub rule: TransitionRule,
    pub orientation: Orientation,
    pub rng_seed: u64,
    pub heuristic_weights: HeuristicWeights,
    pub eval_weights: EvaluationWeights,
}

impl Default for SolverConfig {
    fn default() -> Self {
        Self {
            alpha: 1.0,
            beta: 2.0,
            rho: 0.1,
            q0: 0.4,
            lambda: 0.9,
            num_ants: 20,
            num_iterations: 500,
            rule: TransitionRule::Cstr,
            orientation: Orientation::Maximize,
            rng_seed: 0,
            heuristic_weights: HeuristicWeights::default(),
            eval_weights: EvaluationWeights::default(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SolverError {
    #[error("invalid solver configuration: {0}")]
    InvalidConfig(String),
}

impl SolverConfig {
    pub fn validate(&self) -> Result<(), SolverError> {
        let bad = |m: String| Err(SolverError::InvalidConfig(m));
        if !(self.lambda > 0.0 && self.lambda < 1.0) {
            return bad(format!("lambda must lie in (0, 1), got {}", self.lambda));
        }
        if !(self.rho > 0.0 && self.rho < 1.0) {
            return bad(format!("rho must lie in (0, 1), got {}", self.rho));
        }
        if !(0.0..=1.0).contains(&self.q0) {
            return bad(format!("q0 must lie in [0, 1], got {}", self.q0));
        }
        if !(self.alpha >= 0.0
            && self.beta >= 0.0
            && self.alpha.is_finite()
            && self.beta.is_finite())
        {
            return bad("alpha and beta must be non-negative".into());
        }
        if self.num_ants == 0 || self.num_iterations == 0 {
            return bad("ants and iterations must be positive".into());
        }
        self.heuristic_weights
            .validate()
            .map_err(SolverError::InvalidConfig)?;
        self.eval_weights
            .validate()
            .map_err(SolverError::InvalidConfig)
    }

    pub fn exponents(&self) -> Exponents {
        Exponents::new(self.alpha, self.beta, self.lambda)
    }
}

/// A complete path from the unit to the target with its objective values.
#[derive(Debug, Clone, PartialEq)]
pub struct SolutionPath {
    pub nodes: Vec<usize>,
    /// Speed objective (resources plus light visibility penalty).
    pub ff: f64,
    /// Safety objective (energy plus heavy visibility penalty).
    pub fs: f64,
}

impl SolutionPath {
    pub fn objectives(&self) -> (f64, f64) {
        (self.ff, self.fs)
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct RunStats {
    pub iterations: usize,
    pub ants_succeeded: usize,
    pub ants_failed: usize,
    pub elapsed: Duration,
}

#[derive(Debug, Clone)]
pub struct SolveOutcome {
    pub archive: ParetoArchive,
    pub stats: RunStats,
}

/// Static per-edge data for one solve.
struct EdgeFactors {
    eta_f: Vec<f64>,
    eta_s: Vec<f64>,
    eta_pow_f: Vec<f64>,
    eta_pow_s: Vec<f64>,
}

/// Mutable colony state over a borrowed graph and visibility field.
pub struct Colony<'a> {
    graph: &'a CostGraph,
    zo: &'a ZoField,
    cfg: SolverConfig,
    ex: Exponents,
    factors: EdgeFactors,
    pheromone: PheromoneField,
    // tau^exponent per edge, refreshed on every write
    pow_f: Vec<f64>,
    pow_s: Vec<f64>,
    archive: ParetoArchive,
    rng: ChaCha8Rng,
    visited: Vec<bool>,
    stats: RunStats,
    trace: Option<Vec<PheromoneEvent>>,
}

impl<'a> Colony<'a> {
    pub fn new(
        graph: &'a CostGraph,
        zo: &'a ZoField,
        cfg: &SolverConfig,
    ) -> Result<Self, SolverError> {
        cfg.validate()?;
        let ex = cfg.exponents();
        let slots = graph.numc() * DEGREE;
        let mut factors = EdgeFactors {
            eta_f: vec![0.0; slots],
            eta_s: vec![0.0; slots],
            eta_pow_f: vec![0.0; slots],
            eta_pow_s: vec![0.0; slots],
        };
        for node in 0..graph.numc() {
            for (id, _) in graph.out_edges(node) {
                let hf = heuristic_f(graph, zo, id, &cfg.heuristic_weights);
                let hs = heuristic_s(graph, zo, id, &cfg.heuristic_weights);
                factors.eta_f[id] = hf;
                factors.eta_s[id] = hs;
                factors.eta_pow_f[id] = hf.powf(ex.heur_f);
                factors.eta_pow_s[id] = hs.powf(ex.heur_s);
            }
        }
        let pheromone = PheromoneField::new(graph);
        let pow_f = vec![pheromone.tau0_f().powf(ex.pher_f); slots];
        let pow_s = vec![pheromone.tau0_s().powf(ex.pher_s); slots];
        Ok(Self {
            graph,
            zo,
            ex,
            factors,
            pheromone,
            pow_f,
            pow_s,
            archive: ParetoArchive::new(),
            rng: ChaCha8Rng::seed_from_u64(cfg.rng_seed),
            visited: vec![false; graph.numc()],
            stats: RunStats::default(),
            trace: None,
            cfg: cfg.clone(),
        })
    }

    /// Starts recording every pheromone write.
    pub fn record_trace(&mut self) {
        self.trace = Some(Vec::new());
    }

    pub fn trace(&self) -> Option<&[PheromoneEvent]> {
        self.trace.as_deref()
    }

    pub fn pheromone(&self) -> &PheromoneField {
        &self.pheromone
    }

    pub fn archive(&self) -> &ParetoArchive {
        &self.archive
    }

    pub fn stats(&self) -> RunStats {
        self.stats
    }

    pub fn config(&self) -> &SolverConfig {
        &self.cfg
    }

    /// Static speed and safety heuristics of an edge.
    pub fn heuristics(&self, edge: EdgeId) -> (f64, f64) {
        (self.factors.eta_f[edge], self.factors.eta_s[edge])
    }

    fn refresh(&mut self, edge: EdgeId) {
        self.pow_f[edge] = self.pheromone.tau_f(edge).powf(self.ex.pher_f);
        self.pow_s[edge] = self.pheromone.tau_s(edge).powf(self.ex.pher_s);
    }

    fn local_update(&mut self, edge: EdgeId) {
        self.pheromone.local_update(edge, self.cfg.rho);
        self.refresh(edge);
        if let Some(t) = &mut self.trace {
            t.push(PheromoneEvent::Local(edge));
        }
    }

    /// One ant's walk. On a dead end the partial path is dropped; local
    /// updates already applied stay.
    pub fn construct_path(&mut self) -> Result<SolutionPath, DeadEnd> {
        let graph = self.graph;
        let start = graph.start();
        let target = graph.target();
        let mut energy = graph.energy_budget();
        let mut resources = graph.resource_budget();
        let mut nodes = vec![start];
        self.visited[start] = true;
        let mut at = start;
        let outcome = loop {
            if at == target {
                break Ok(());
            }
            let mut ids = [0usize; DEGREE];
            let mut to = [0usize; DEGREE];
            let mut n = 0;
            for (id, e) in graph.out_edges(at) {
                if !self.visited[e.to] && e.cr <= resources && e.ce <= energy {
                    ids[n] = id;
                    to[n] = e.to;
                    n += 1;
                }
            }
            let pick = match self.cfg.rule {
                TransitionRule::Cstr => {
                    let mut scores = [0f64; DEGREE];
                    for k in 0..n {
                        let id = ids[k];
                        scores[k] = self.pow_f[id]
                            * self.factors.eta_pow_f[id]
                            * self.pow_s[id]
                            * self.factors.eta_pow_s[id];
                    }
                    cstr_choose(&scores[..n], self.cfg.q0, &mut self.rng)
                }
                TransitionRule::Dstr => {
                    let mut costs = [(0f64, 0f64); DEGREE];
                    for k in 0..n {
                        let id = ids[k];
                        costs[k] = (
                            self.pow_f[id] * self.factors.eta_pow_f[id],
                            self.pow_s[id] * self.factors.eta_pow_s[id],
                        );
                    }
                    dstr_choose(
                        &costs[..n],
                        self.cfg.orientation,
                        self.cfg.q0,
                        &mut self.rng,
                    )
                }
            };
            let k = match pick {
                Ok(k) => k,
                Err(e) => break Err(e),
            };
            let edge = ids[k];
            self.local_update(edge);
            let cost = graph.edge(edge).unwrap();
            resources -= cost.cr;
            energy -= cost.ce;
            at = to[k];
            self.visited[at] = true;
            nodes.push(at);
        };
        for &v in &nodes {
            self.visited[v] = false;
        }
        outcome?;
        let (ff, fs) = evaluate_path(&nodes, graph, self.zo, &self.cfg.eval_weights)
            .expect("ant walked a missing edge");
        Ok(SolutionPath { nodes, ff, fs })
    }

    /// All ants build a path, survivors are offered to the archive, then the
    /// archive makes its global deposit.
    pub fn run_iteration(&mut self) {
        for _ in 0..self.cfg.num_ants {
            match self.construct_path() {
                Ok(sol) => {
                    self.stats.ants_succeeded += 1;
                    self.archive.insert(sol);
                }
                Err(DeadEnd) => self.stats.ants_failed += 1,
            }
        }
        let events = self
            .pheromone
            .global_update(self.graph, &self.archive, self.cfg.rho);
        for ev in &events {
            if let PheromoneEvent::Global { edge, .. } = *ev {
                self.refresh(edge);
            }
        }
        if let Some(t) = &mut self.trace {
            t.extend(events);
        }
        self.stats.iterations += 1;
    }

    pub fn run(&mut self) {
        let started = Instant::now();
        for _ in 0..self.cfg.num_iterations {
            self.run_iteration();
        }
        self.stats.elapsed += started.elapsed();
    }

    pub fn into_outcome(self) -> SolveOutcome {
        SolveOutcome {
            archive: self.archive,
            stats: self.stats,
        }
    }
}

/// Runs a full colony on a prepared graph and visibility field.
pub fn solve_graph(
    graph: &CostGraph,
    zo: &ZoField,
    cfg: &SolverConfig,
) -> Result<SolveOutcome, SolverError> {
    let mut colony = Colony::new(graph, zo, cfg)?;
    colony.run();
    Ok(colony.into_outcome())
}

/// Builds the graph and visibility field from the map's own cost table and
/// visibility settings, then runs the colony.
pub fn solve(map: &ScenarioMap, cfg: &SolverConfig) -> Result<SolveOutcome, SolverError> {
    cfg.validate()?;
    let graph = build_graph(map, &map.params().cost_table);
    let zo = compute_zo(map, &map.params().visibility);
    solve_graph(&graph, &zo, cfg)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scenario::parse_scenario;

    fn quick(rule: TransitionRule) -> SolverConfig {
        SolverConfig {
            num_ants: 5,
            num_iterations: 20,
            rule,
            ..Default::default()
        }
    }

    #[test]
    fn trivial_map_single_solution() {
        let map = parse_scenario("N0:U N0:T").unwrap();
        for rule in [TransitionRule::Cstr, TransitionRule::Dstr] {
            let out = solve(&map, &quick(rule)).unwrap();
            assert_eq!(out.archive.len(), 1);
            assert_eq!(out.archive.solutions()[0].nodes, [0, 1]);
            assert_eq!(out.stats.ants_succeeded, 100);
            assert_eq!(out.stats.ants_failed, 0);
        }
    }

    #[test]
    fn boxed_in_unit_dead_ends() {
        let map = parse_scenario("N0:U O0 N0\nO0 O0 N0\nN0 N0 N0:T\n").unwrap();
        let graph = build_graph(&map, &map.params().cost_table);
        let zo = compute_zo(&map, &map.params().visibility);
        let mut colony = Colony::new(&graph, &zo, &quick(TransitionRule::Cstr)).unwrap();
        assert_eq!(colony.construct_path(), Err(DeadEnd));
        colony.run();
        assert!(colony.archive().is_empty());
        assert_eq!(colony.stats().ants_succeeded, 0);
    }

    #[test]
    fn invalid_configs() {
        let map = parse_scenario("N0:U N0:T").unwrap();
        for cfg in [
            SolverConfig {
                lambda: 1.0,
                ..Default::default()
            },
            SolverConfig {
                lambda: 0.0,
                ..Default::default()
            },
            SolverConfig {
                rho: 0.0,
                ..Default::default()
            },
            SolverConfig {
                q0: 1.5,
                ..Default::default()
            },
            SolverConfig {
                num_ants: 0,
                ..Default::default()
            },
        ] {
            assert!(matches!(
                solve(&map, &cfg),
                Err(SolverError::InvalidConfig(_))
            ));
        }
    }

    #[test]
    fn same_seed_same_archive() {
        let map = crate::scenario::generate_river_forest(4);
        let cfg = SolverConfig {
            num_iterations: 30,
            ..quick(TransitionRule::Cstr)
        };
        let a = solve(&map, &cfg).unwrap();
        let b = solve(&map, &cfg).unwrap();
        assert_eq!(a.archive, b.archive);
        let c = solve(&map, &SolverConfig { rng_seed: 1, ..cfg }).unwrap();
        assert!(!c.archive.is_empty());
    }

    #[test]
    fn cached_scores_match_direct_formula() {
        let map = crate::scenario::generate_walls(2);
        let graph = build_graph(&map, &map.params().cost_table);
        let zo = compute_zo(&map, &map.params().visibility);
        let mut colony = Colony::new(&graph, &zo, &quick(TransitionRule::Cstr)).unwrap();
        colony.run();
        let ex = colony.ex;
        for node in 0..graph.numc() {
            for (id, _) in graph.out_edges(node) {
                let p = colony.pheromone();
                let (hf, hs) = colony.heuristics(id);
                let direct = cstr_score(p.tau_f(id), p.tau_s(id), hf, hs, &ex);
                let cached = colony.pow_f[id]
                    * colony.factors.eta_pow_f[id]
                    * colony.pow_s[id]
                    * colony.factors.eta_pow_s[id];
                assert!((direct - cached).abs() <= 1e-12 * direct.abs());
            }
        }
    }
}
