//! Two pheromone matrices, one per objective, with ACS local and global
//! updates.

use crate::costgraph::{CostGraph, EdgeId, DEGREE};

use super::archive::ParetoArchive;

#[derive(Debug, Clone, PartialEq)]
pub struct PheromoneField {
    tau_f: Vec<f64>,
    tau_s: Vec<f64>,
    tau0_f: f64,
    tau0_s: f64,
}

/// One recorded pheromone write, for replaying a run.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum PheromoneEvent {
    Local(EdgeId),
    Global { edge: EdgeId, ff: f64, fs: f64 },
}

impl PheromoneField {
    /// Every slot starts at `1 / (numc * MAX_R)` and `1 / (numc * MAX_E)`.
    pub fn new(graph: &CostGraph) -> Self {
        let numc = graph.numc() as f64;
        let tau0_f = 1.0 / (numc * graph.max_r());
        let tau0_s = 1.0 / (numc * graph.max_e());
        Self::uniform(graph.numc() * DEGREE, tau0_f, tau0_s)
    }

    pub fn uniform(slots: usize, tau0_f: f64, tau0_s: f64) -> Self {
        Self {
            tau_f: vec![tau0_f; slots],
            tau_s: vec![tau0_s; slots],
            tau0_f,
            tau0_s,
        }
    }

    pub fn tau0_f(&self) -> f64 {
        self.tau0_f
    }

    pub fn tau0_s(&self) -> f64 {
        self.tau0_s
    }

    pub fn tau_f(&self, edge: EdgeId) -> f64 {
        self.tau_f[edge]
    }

    pub fn tau_s(&self, edge: EdgeId) -> f64 {
        self.tau_s[edge]
    }

    pub fn all_f(&self) -> &[f64] {
        &self.tau_f
    }

    pub fn all_s(&self) -> &[f64] {
        &self.tau_s
    }

    pub fn set(&mut self, edge: EdgeId, tau_f: f64, tau_s: f64) {
        self.tau_f[edge] = tau_f;
        self.tau_s[edge] = tau_s;
    }

    /// Pulls both trails of `edge` towards their initial values.
    pub fn local_update(&mut self, edge: EdgeId, rho: f64) {
        self.tau_f[edge] = (1.0 - rho) * self.tau_f[edge] + rho * self.tau0_f;
        self.tau_s[edge] = (1.0 - rho) * self.tau_s[edge] + rho * self.tau0_s;
    }

    /// Deposit of one solution with objective values `(ff, fs)` on `edge`.
    pub fn deposit(&mut self, edge: EdgeId, rho: f64, ff: f64, fs: f64) {
        self.tau_f[edge] = (1.0 - rho) * self.tau_f[edge] + rho / ff;
        self.tau_s[edge] = (1.0 - rho) * self.tau_s[edge] + rho / fs;
    }

    /// Every archived solution deposits on each edge of its path, in archive
    /// order. Returns the edges touched, in update order.
    pub fn global_update(
        &mut self,
        graph: &CostGraph,
        archive: &ParetoArchive,
        rho: f64,
    ) -> Vec<PheromoneEvent> {
        let mut events = Vec::new();
        for sol in archive.solutions() {
            for pair in sol.nodes.windows(2) {
                let edge = graph
                    .edge_between(pair[0], pair[1])
                    .expect("archived path uses a missing edge");
                self.deposit(edge, rho, sol.ff, sol.fs);
                events.push(PheromoneEvent::Global {
                    edge,
                    ff: sol.ff,
                    fs: sol.fs,
                });
            }
        }
        events
    }

    /// Applies a recorded event.
    pub fn apply(&mut self, event: &PheromoneEvent, rho: f64) {
        match *event {
            PheromoneEvent::Local(edge) => self.local_update(edge, rho),
            PheromoneEvent::Global { edge, ff, fs } => self.deposit(edge, rho, ff, fs),
        }
    }
}
