//! Greedy reference walker: no pheromone, no randomness. At every step it
//! moves to the neighbour whose `(ηf, ηs)` pair dominates the most sibling
//! candidates.

use std::fmt;

use crate::costgraph::{CostGraph, DEGREE};
use crate::solver::{
    dominance_counts, evaluate_path, heuristic_f, heuristic_s, EvaluationWeights, HeuristicWeights,
    Orientation, SolutionPath,
};
use crate::visibility::ZoField;

#[derive(Debug, Clone, PartialEq)]
pub struct GreedyConfig {
    /// Maximum number of moves before the walk is declared a loop.
    /// `None` means four times the number of cells.
    pub step_cap: Option<usize>,
    /// Whether the walker may step back onto cells it already visited.
    pub allow_revisits: bool,
    pub heuristic_weights: HeuristicWeights,
    pub eval_weights: EvaluationWeights,
    pub orientation: Orientation,
}

impl Default for GreedyConfig {
    fn default() -> Self {
        Self {
            step_cap: None,
            allow_revisits: true,
            heuristic_weights: HeuristicWeights::default(),
            eval_weights: EvaluationWeights::default(),
            orientation: Orientation::Maximize,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum NoSolutionReason {
    LoopDetected,
    DeadEnd,
    BudgetExhausted,
}

impl fmt::Display for NoSolutionReason {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            NoSolutionReason::LoopDetected => "loop detected",
            NoSolutionReason::DeadEnd => "dead end",
            NoSolutionReason::BudgetExhausted => "budget exhausted",
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum GreedyResult {
    Solution(SolutionPath),
    NoSolution(NoSolutionReason),
}

impl GreedyResult {
    pub fn solution(&self) -> Option<&SolutionPath> {
        match self {
            GreedyResult::Solution(s) => Some(s),
            GreedyResult::NoSolution(_) => None,
        }
    }
}

/// Runs the greedy walker. A successful walk is returned with its loops
/// erased, so the path is simple even when revisits happened on the way.
pub fn greedy_solve(graph: &CostGraph, zo: &ZoField, cfg: &GreedyConfig) -> GreedyResult {
    let cap = cfg.step_cap.unwrap_or(4 * graph.numc());
    let target = graph.target();
    let mut visited = vec![false; graph.numc()];
    let mut walk = vec![graph.start()];
    visited[graph.start()] = true;
    let mut energy = graph.energy_budget();
    let mut resources = graph.resource_budget();
    let mut at = graph.start();
    let mut steps = 0;

    while at != target {
        if steps == cap {
            return GreedyResult::NoSolution(NoSolutionReason::LoopDetected);
        }
        let mut ids = [0usize; DEGREE];
        let mut etas = [(0f64, 0f64); DEGREE];
        let mut n = 0;
        let mut open = 0;
        for (id, e) in graph.out_edges(at) {
            if visited[e.to] && !cfg.allow_revisits {
                continue;
            }
            open += 1;
            if e.cr <= resources && e.ce <= energy {
                ids[n] = id;
                etas[n] = (
                    heuristic_f(graph, zo, id, &cfg.heuristic_weights),
                    heuristic_s(graph, zo, id, &cfg.heuristic_weights),
                );
                n += 1;
            }
        }
        if n == 0 {
            let reason = if open == 0 {
                NoSolutionReason::DeadEnd
            } else {
                NoSolutionReason::BudgetExhausted
            };
            return GreedyResult::NoSolution(reason);
        }
        let mut counts = [0usize; DEGREE];
        dominance_counts(&etas[..n], cfg.orientation, &mut counts[..n]);
        // out_edges yields neighbours in ascending node order, so the first
        // maximum is the lowest index
        let mut best = 0;
        for k in 1..n {
            if counts[k] > counts[best] {
                best = k;
            }
        }
        let edge = graph.edge(ids[best]).expect("listed edge exists");
        resources -= edge.cr;
        energy -= edge.ce;
        at = edge.to;
        visited[at] = true;
        walk.push(at);
        steps += 1;
    }

    let nodes = erase_loops(&walk, graph.numc());
    let (ff, fs) = evaluate_path(&nodes, graph, zo, &cfg.eval_weights)
        .expect("greedy walk follows graph edges");
    GreedyResult::Solution(SolutionPath { nodes, ff, fs })
}

/// Chronological loop erasure: whenever the walk returns to a node, the
/// cycle since its last visit is cut out.
fn erase_loops(walk: &[usize], numc: usize) -> Vec<usize> {
    let mut pos: Vec<Option<usize>> = vec![None; numc];
    let mut out: Vec<usize> = Vec::with_capacity(walk.len());
    for &v in walk {
        if let Some(p) = pos[v] {
            for &gone in &out[p + 1..] {
                pos[gone] = None;
            }
            out.truncate(p + 1);
        } else {
            pos[v] = Some(out.len());
            out.push(v);
        }
    }
    out
}
