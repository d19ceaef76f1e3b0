//! Bi-criteria path planning for a military unit on a grid battlefield.
//!
//! The crate models a battlefield as a grid of typed cells with heights,
//! enemy positions and fire-affected zones, turns it into an 8-connected
//! digraph carrying a resource cost and an energy cost on every edge, and
//! searches for paths that trade speed against safety with a two-matrix
//! Ant Colony System (the CHAC colony). A dominance-driven greedy walker is
//! provided as a baseline, and [`cli`] holds the batch experiment harness and
//! the ASCII/SVG renderers used by the `chac` binary.
//!
//! ```
//! use chac::{scenario, solver};
//!
//! let map = scenario::parse_scenario("N0:U N0:T\n").unwrap();
//! let cfg = solver::SolverConfig { num_iterations: 5, num_ants: 3, ..Default::default() };
//! let run = solver::solve(&map, &cfg).unwrap();
//! assert_eq!(run.archive.len(), 1);
//! ```

pub mod baseline;
pub mod cli;
pub mod costgraph;
pub mod scenario;
pub mod solver;
pub mod visibility;

pub use baseline::{greedy_solve, GreedyConfig, GreedyResult, NoSolutionReason};
pub use costgraph::{CostGraph, CostTable};
pub use scenario::{Cell, CellSubtype, CellType, Coord, ScenarioError, ScenarioMap};
pub use solver::{solve, ParetoArchive, SolutionPath, SolverConfig, TransitionRule};
pub use visibility::{compute_zo, VisibilityConfig, ZoField};
