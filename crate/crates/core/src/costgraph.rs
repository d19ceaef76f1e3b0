//! The weighted 8-connected digraph ants walk on.
//!
//! Each traversable cell is a node. A directed edge `i -> j` exists between
//! traversable neighbours and carries a resource cost `Cr` (terrain of `j`
//! plus a slope penalty that is cheaper downhill than uphill) and an energy
//! cost `Ce` (no-combat casualties of `j` plus enemy fire damage on `j`).

use crate::scenario::{neighbours8, CellSubtype, CellType, Coord, ScenarioMap, UnitState};

/// Number of direction slots per node.
pub const DEGREE: usize = 8;

/// Direction offsets, ordered so that neighbour indices ascend.
pub const DIRECTIONS: [(isize, isize); DEGREE] = [
    (-1, -1),
    (0, -1),
    (1, -1),
    (-1, 0),
    (1, 0),
    (-1, 1),
    (0, 1),
    (1, 1),
];

/// One value per traversable terrain type.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PerTerrain {
    pub normal: f64,
    pub forest: f64,
    pub water: f64,
}

impl PerTerrain {
    pub fn get(&self, t: CellType) -> f64 {
        match t {
            CellType::Normal => self.normal,
            CellType::Forest => self.forest,
            CellType::Water => self.water,
            // never the destination of an edge
            CellType::Obstacle => f64::INFINITY,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CostTable {
    pub resource_cost: PerTerrain,
    pub nocombat_energy: PerTerrain,
    /// Resource points per height unit climbed.
    pub up_slope_factor: f64,
    /// Resource points per height unit descended.
    pub down_slope_factor: f64,
    /// Energy points per fire damage level.
    pub fire_energy_scale: f64,
}

impl Default for CostTable {
    fn default() -> Self {
        Self {
            resource_cost: PerTerrain {
                normal: 1.0,
                forest: 3.0,
                water: 6.0,
            },
            nocombat_energy: PerTerrain {
                normal: 1.0,
                forest: 1.0,
                water: 2.0,
            },
            up_slope_factor: 1.0,
            down_slope_factor: 0.25,
            fire_energy_scale: 0.1,
        }
    }
}

impl CostTable {
    pub fn validate(&self) -> Result<(), String> {
        let entries = [
            ("resource_cost.normal", self.resource_cost.normal),
            ("resource_cost.forest", self.resource_cost.forest),
            ("resource_cost.water", self.resource_cost.water),
            ("nocombat_energy.normal", self.nocombat_energy.normal),
            ("nocombat_energy.forest", self.nocombat_energy.forest),
            ("nocombat_energy.water", self.nocombat_energy.water),
            ("up_slope_factor", self.up_slope_factor),
            ("down_slope_factor", self.down_slope_factor),
            ("fire_energy_scale", self.fire_energy_scale),
        ];
        for (key, v) in entries {
            if !(v.is_finite() && v > 0.0) {
                return Err(format!("{key} must be a positive number, got {v}"));
            }
        }
        if self.resource_cost.forest <= self.resource_cost.normal {
            return Err("resource_cost.forest must exceed resource_cost.normal".into());
        }
        if self.down_slope_factor >= self.up_slope_factor {
            return Err("down_slope_factor must be below up_slope_factor".into());
        }
        Ok(())
    }

    pub fn slope_penalty(&self, from_height: i8, to_height: i8) -> f64 {
        let dh = f64::from(to_height) - f64::from(from_height);
        if dh > 0.0 {
            self.up_slope_factor * dh
        } else {
            self.down_slope_factor * -dh
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EdgeCost {
    pub to: usize,
    /// Resource cost.
    pub cr: f64,
    /// Energy cost.
    pub ce: f64,
}

/// Directed edge identifier: `node * DEGREE + direction`.
pub type EdgeId = usize;

#[derive(Debug, Clone, PartialEq)]
pub struct CostGraph {
    width: usize,
    height: usize,
    feasible: Vec<bool>,
    edges: Vec<Option<EdgeCost>>,
    max_r: f64,
    max_e: f64,
    start: usize,
    target: usize,
    energy_budget: f64,
    resource_budget: f64,
}

pub fn euclid_distance(a: Coord, b: Coord) -> f64 {
    let dx = a.x as f64 - b.x as f64;
    let dy = a.y as f64 - b.y as f64;
    dx.hypot(dy)
}

pub fn build_graph(map: &ScenarioMap, table: &CostTable) -> CostGraph {
    let (w, h) = (map.width(), map.height_cells());
    let cells = map.cells();
    let feasible: Vec<bool> = cells.iter().map(|c| c.is_traversable()).collect();
    let mut edges = vec![None; cells.len() * DEGREE];
    let mut max_r = 0.0f64;
    let mut max_e = 0.0f64;
    for i in 0..cells.len() {
        if !feasible[i] {
            continue;
        }
        let from = &cells[i];
        let (x, y) = (i % w, i / w);
        for (dir, (dx, dy)) in DIRECTIONS.iter().enumerate() {
            let (Some(nx), Some(ny)) = (x.checked_add_signed(*dx), y.checked_add_signed(*dy))
            else {
                continue;
            };
            if nx >= w || ny >= h {
                continue;
            }
            let j = ny * w + nx;
            if !feasible[j] {
                continue;
            }
            let to = &cells[j];
            let cr =
                table.resource_cost.get(to.cell_type) + table.slope_penalty(from.height, to.height);
            let damage = match to.subtype {
                CellSubtype::FireAffected(d) => f64::from(d),
                _ => 0.0,
            };
            let ce = table.nocombat_energy.get(to.cell_type) + table.fire_energy_scale * damage;
            max_r = max_r.max(cr);
            max_e = max_e.max(ce);
            edges[i * DEGREE + dir] = Some(EdgeCost { to: j, cr, ce });
        }
    }
    // A map without a single edge still needs finite initial pheromone.
    if max_r == 0.0 {
        max_r = 1.0;
    }
    if max_e == 0.0 {
        max_e = 1.0;
    }
    CostGraph {
        width: w,
        height: h,
        feasible,
        edges,
        max_r,
        max_e,
        start: map.index(map.unit_start()),
        target: map.index(map.target()),
        energy_budget: map.params().energy_budget,
        resource_budget: map.params().resource_budget,
    }
}

impl CostGraph {
    pub fn numc(&self) -> usize {
        self.feasible.len()
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn start(&self) -> usize {
        self.start
    }

    pub fn target(&self) -> usize {
        self.target
    }

    pub fn energy_budget(&self) -> f64 {
        self.energy_budget
    }

    pub fn resource_budget(&self) -> f64 {
        self.resource_budget
    }

    /// The unit at its start with full budgets.
    pub fn initial_state(&self) -> UnitState {
        UnitState {
            position: self.coord(self.start),
            energy: self.energy_budget,
            resources: self.resource_budget,
        }
    }

    pub fn max_r(&self) -> f64 {
        self.max_r
    }

    pub fn max_e(&self) -> f64 {
        self.max_e
    }

    pub fn is_feasible(&self, node: usize) -> bool {
        self.feasible[node]
    }

    pub fn coord(&self, node: usize) -> Coord {
        Coord::new(node % self.width, node / self.width)
    }

    pub fn node(&self, c: Coord) -> usize {
        c.y * self.width + c.x
    }

    /// Raw slot table, `DEGREE` entries per node.
    pub fn edge_slots(&self) -> &[Option<EdgeCost>] {
        &self.edges
    }

    pub fn edge(&self, id: EdgeId) -> Option<&EdgeCost> {
        self.edges[id].as_ref()
    }

    /// Out-edges of `node` with their ids, in ascending destination order.
    pub fn out_edges(&self, node: usize) -> impl Iterator<Item = (EdgeId, &EdgeCost)> + '_ {
        let base = node * DEGREE;
        self.edges[base..base + DEGREE]
            .iter()
            .enumerate()
            .filter_map(move |(d, e)| e.as_ref().map(|e| (base + d, e)))
    }

    /// Id of the edge `from -> to`, if they are connected.
    pub fn edge_between(&self, from: usize, to: usize) -> Option<EdgeId> {
        self.out_edges(from)
            .find(|(_, e)| e.to == to)
            .map(|(id, _)| id)
    }

    pub fn edge_count(&self) -> usize {
        self.edges.iter().flatten().count()
    }

    pub fn dist_to_target(&self, node: usize) -> f64 {
        euclid_distance(self.coord(node), self.coord(self.target))
    }

    /// Neighbours reachable from `at` that are unvisited and affordable with
    /// the remaining budgets, in ascending node order.
    pub fn feasible_neighbours(
        &self,
        at: usize,
        visited: &[bool],
        remaining: &UnitState,
    ) -> Vec<usize> {
        self.out_edges(at)
            .filter(|(_, e)| {
                !visited[e.to] && e.cr <= remaining.resources && e.ce <= remaining.energy
            })
            .map(|(_, e)| e.to)
            .collect()
    }
}

/// Neighbour coordinates of a node regardless of feasibility.
pub fn grid_neighbours(graph: &CostGraph, node: usize) -> impl Iterator<Item = usize> + '_ {
    neighbours8(graph.coord(node), graph.width, graph.height).map(|c| graph.node(c))
}
