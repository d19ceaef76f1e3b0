//! Per-edge desirability for the speed and safety objectives.

use crate::costgraph::{CostGraph, EdgeId};
use crate::visibility::ZoField;

/// Weights of the three terms of one objective's heuristic.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TermWeights {
    /// Weight of the inverse edge cost.
    pub cost: f64,
    /// Weight of the inverse distance to the target.
    pub distance: f64,
    /// Weight of the destination's hiddenness.
    pub hidden: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HeuristicWeights {
    pub speed: TermWeights,
    pub safety: TermWeights,
    /// Stand-in for `1 / distance` on edges that enter the target.
    pub target_bonus: f64,
}

impl Default for HeuristicWeights {
    fn default() -> Self {
        Self {
            speed: TermWeights {
                cost: 1.0,
                distance: 2.0,
                hidden: 0.25,
            },
            safety: TermWeights {
                cost: 2.0,
                distance: 0.25,
                hidden: 2.0,
            },
            target_bonus: 10.0,
        }
    }
}

impl HeuristicWeights {
    pub fn validate(&self) -> Result<(), String> {
        let all = [
            self.speed.cost,
            self.speed.distance,
            self.speed.hidden,
            self.safety.cost,
            self.safety.distance,
            self.safety.hidden,
        ];
        if all.iter().any(|w| !(w.is_finite() && *w >= 0.0)) {
            return Err("heuristic weights must be non-negative".into());
        }
        let s = &self.speed;
        if !(s.distance >= s.cost && s.cost >= s.hidden) {
            return Err("speed weights must satisfy distance >= cost >= hidden".into());
        }
        let s = &self.safety;
        if s.cost.min(s.hidden) < s.distance {
            return Err("safety weights must satisfy min(cost, hidden) >= distance".into());
        }
        if !(self.target_bonus.is_finite() && self.target_bonus > 0.0) {
            return Err("target_bonus must be positive".into());
        }
        Ok(())
    }
}

/// `w.cost / cost + w.distance / dist + w.hidden * zo`, with the distance
/// term replaced by `w.distance * target_bonus` when `dist` is zero.
pub fn heuristic_value(cost: f64, dist: f64, zo: f64, w: &TermWeights, target_bonus: f64) -> f64 {
    let dist_term = if dist == 0.0 {
        w.distance * target_bonus
    } else {
        w.distance / dist
    };
    w.cost / cost + dist_term + w.hidden * zo
}

/// Speed heuristic of an existing edge.
pub fn heuristic_f(graph: &CostGraph, zo: &ZoField, edge: EdgeId, w: &HeuristicWeights) -> f64 {
    let e = graph.edge(edge).expect("heuristic of a missing edge");
    heuristic_value(
        e.cr,
        graph.dist_to_target(e.to),
        zo.get(e.to),
        &w.speed,
        w.target_bonus,
    )
}

/// Safety heuristic of an existing edge.
pub fn heuristic_s(graph: &CostGraph, zo: &ZoField, edge: EdgeId, w: &HeuristicWeights) -> f64 {
    let e = graph.edge(edge).expect("heuristic of a missing edge");
    heuristic_value(
        e.ce,
        graph.dist_to_target(e.to),
        zo.get(e.to),
        &w.safety,
        w.target_bonus,
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::costgraph::{build_graph, CostTable};
    use crate::scenario::parse_scenario;
    use crate::visibility::compute_zo;

    const ONES: TermWeights = TermWeights {
        cost: 1.0,
        distance: 1.0,
        hidden: 1.0,
    };

    #[test]
    fn unit_inputs() {
        assert_eq!(heuristic_value(1.0, 1.0, 1.0, &ONES, 10.0), 3.0);
    }

    #[test]
    fn speed_example() {
        let w = TermWeights {
            cost: 1.0,
            distance: 2.0,
            hidden: 0.5,
        };
        let v = heuristic_value(2.0, 5.0, 0.5, &w, 10.0);
        assert!((v - 1.15).abs() < 1e-12);
    }

    #[test]
    fn safety_example() {
        let w = TermWeights {
            cost: 2.0,
            distance: 0.5,
            hidden: 2.0,
        };
        let v = heuristic_value(4.0, 10.0, 0.9, &w, 10.0);
        assert!((v - 2.35).abs() < 1e-12);
    }

    #[test]
    fn target_bonus_replaces_distance() {
        assert_eq!(heuristic_value(1.0, 0.0, 0.0, &ONES, 10.0), 11.0);
    }

    #[test]
    fn monotone_terms() {
        let w = HeuristicWeights::default();
        let mut prev = 0.0;
        for cr in [8.0, 4.0, 2.0, 1.0, 0.5] {
            let v = heuristic_value(cr, 3.0, 0.4, &w.speed, 10.0);
            assert!(v >= prev);
            prev = v;
        }
        let mut prev = 0.0;
        for zo in [0.0, 0.2, 0.7, 1.0] {
            let v = heuristic_value(2.0, 3.0, zo, &w.safety, 10.0);
            assert!(v >= prev);
            prev = v;
        }
    }

    #[test]
    fn graph_edges() {
        let map = parse_scenario("N0:U N0 N0:T\n").unwrap();
        let g = build_graph(&map, &CostTable::default());
        let zo = compute_zo(&map, &map.params().visibility);
        let w = HeuristicWeights::default();
        let e = g.edge_between(0, 1).unwrap();
        let expect = 1.0 / 1.0 + 2.0 / 1.0 + 0.25 * zo.get(1);
        assert!((heuristic_f(&g, &zo, e, &w) - expect).abs() < 1e-12);
        let e = g.edge_between(1, 2).unwrap();
        let expect = 2.0 / 1.0 + 0.25 * 10.0 + 2.0 * zo.get(2);
        assert!((heuristic_s(&g, &zo, e, &w) - expect).abs() < 1e-12);
    }

    #[test]
    fn default_weights_are_valid() {
        assert!(HeuristicWeights::default().validate().is_ok());
        let mut w = HeuristicWeights::default();
        w.speed.hidden = 5.0;
        assert!(w.validate().is_err());
        let mut w = HeuristicWeights::default();
        w.safety.distance = 3.0;
        assert!(w.validate().is_err());
    }
}
