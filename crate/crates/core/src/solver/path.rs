//! Path evaluation and an independent path validator.

use thiserror::Error;

use crate::costgraph::CostGraph;
use crate::visibility::ZoField;

/// Weights of the visibility penalty in the two evaluation functions.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EvaluationWeights {
    pub speed_visibility: f64,
    pub safety_visibility: f64,
}

impl Default for EvaluationWeights {
    fn default() -> Self {
        Self {
            speed_visibility: 0.5,
            safety_visibility: 5.0,
        }
    }
}

impl EvaluationWeights {
    pub fn validate(&self) -> Result<(), String> {
        let (a, b) = (self.speed_visibility, self.safety_visibility);
        if !(a.is_finite() && b.is_finite() && a >= 0.0 && b >= 0.0) {
            return Err("evaluation weights must be non-negative".into());
        }
        if a >= b {
            return Err("speed visibility weight must be below the safety one".into());
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PathError {
    #[error("path is empty")]
    Empty,
    #[error("path starts at node {0}, not at the unit")]
    WrongStart(usize),
    #[error("path ends at node {0}, not at the target")]
    WrongEnd(usize),
    #[error("nodes {0} and {1} are not connected")]
    NotAdjacent(usize, usize),
    #[error("node {0} is visited twice")]
    Revisit(usize),
    #[error("node {0} is not traversable")]
    Blocked(usize),
    #[error("budget exceeded at step {0}")]
    OverBudget(usize),
}

/// `(Ff, Fs)` of a node sequence. Every node after the first contributes
/// the cost of the edge reaching it plus its weighted visibility.
pub fn evaluate_path(
    nodes: &[usize],
    graph: &CostGraph,
    zo: &ZoField,
    w: &EvaluationWeights,
) -> Result<(f64, f64), PathError> {
    let mut ff = 0.0;
    let mut fs = 0.0;
    for pair in nodes.windows(2) {
        let (i, j) = (pair[0], pair[1]);
        let edge = graph
            .edge_between(i, j)
            .and_then(|id| graph.edge(id))
            .ok_or(PathError::NotAdjacent(i, j))?;
        let exposure = 1.0 - zo.get(j);
        ff += edge.cr + w.speed_visibility * exposure;
        fs += edge.ce + w.safety_visibility * exposure;
    }
    Ok((ff, fs))
}

/// Checks a path from first principles: endpoints, king-move adjacency on
/// the grid, traversability, no repeated node, and cumulative costs within
/// the unit's starting budgets.
pub fn validate_path(nodes: &[usize], graph: &CostGraph) -> Result<(), PathError> {
    let (&first, &last) = nodes.first().zip(nodes.last()).ok_or(PathError::Empty)?;
    if first != graph.start() {
        return Err(PathError::WrongStart(first));
    }
    if last != graph.target() {
        return Err(PathError::WrongEnd(last));
    }
    let mut seen = std::collections::HashSet::new();
    for &n in nodes {
        if !seen.insert(n) {
            return Err(PathError::Revisit(n));
        }
        if !graph.is_feasible(n) {
            return Err(PathError::Blocked(n));
        }
    }
    let (mut energy, mut resources) = (graph.energy_budget(), graph.resource_budget());
    for (step, pair) in nodes.windows(2).enumerate() {
        let (a, b) = (graph.coord(pair[0]), graph.coord(pair[1]));
        if a.chebyshev(b) != 1 {
            return Err(PathError::NotAdjacent(pair[0], pair[1]));
        }
        let edge = graph
            .edge_between(pair[0], pair[1])
            .and_then(|id| graph.edge(id))
            .ok_or(PathError::NotAdjacent(pair[0], pair[1]))?;
        if edge.cr > resources || edge.ce > energy {
            return Err(PathError::OverBudget(step));
        }
        resources -= edge.cr;
        energy -= edge.ce;
    }
    Ok(())
}
