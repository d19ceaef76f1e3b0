//! Battlefield data model, the plain-text scenario format and the generators
//! for the three benchmark map families.

mod format;
mod generate;

pub use format::{parse_scenario, serialize_scenario};
pub use generate::{generate_river_forest, generate_valleys, generate_walls, Generator};

use std::collections::VecDeque;
use std::fmt;

use thiserror::Error;

use crate::costgraph::CostTable;
use crate::visibility::VisibilityConfig;

/// Starting energy and resource points when a scenario does not set them.
pub const DEFAULT_BUDGET: f64 = 1000.0;
pub const MIN_HEIGHT: i8 = -3;
pub const MAX_HEIGHT: i8 = 3;
pub const MAX_DAMAGE: u8 = 100;

/// Grid coordinate, `x` is the column and `y` the row.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Coord {
    pub x: usize,
    pub y: usize,
}

impl Coord {
    pub const fn new(x: usize, y: usize) -> Self {
        Self { x, y }
    }

    /// Chebyshev (king-move) distance.
    pub fn chebyshev(self, other: Coord) -> usize {
        self.x.abs_diff(other.x).max(self.y.abs_diff(other.y))
    }
}

impl fmt::Display for Coord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.x, self.y)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum CellType {
    #[default]
    Normal,
    Forest,
    Water,
    Obstacle,
}

impl CellType {
    pub fn letter(self) -> char {
        match self {
            CellType::Normal => 'N',
            CellType::Forest => 'F',
            CellType::Water => 'W',
            CellType::Obstacle => 'O',
        }
    }

    pub fn from_letter(c: char) -> Option<Self> {
        match c {
            'N' => Some(CellType::Normal),
            'F' => Some(CellType::Forest),
            'W' => Some(CellType::Water),
            'O' => Some(CellType::Obstacle),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum CellSubtype {
    #[default]
    None,
    UnitStart,
    EnemyPosition,
    TargetPoint,
    /// Collapsed enemy fire impact, 1..=100.
    FireAffected(u8),
    Lethal,
}

impl CellSubtype {
    pub fn damage_level(self) -> u8 {
        match self {
            CellSubtype::FireAffected(d) => d,
            _ => 0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct Cell {
    pub cell_type: CellType,
    pub subtype: CellSubtype,
    pub height: i8,
}

impl Cell {
    pub const fn new(cell_type: CellType, height: i8) -> Self {
        Self {
            cell_type,
            subtype: CellSubtype::None,
            height,
        }
    }

    pub const fn with_subtype(mut self, subtype: CellSubtype) -> Self {
        self.subtype = subtype;
        self
    }

    /// Whether a unit may ever stand on this cell.
    pub fn is_traversable(&self) -> bool {
        self.cell_type != CellType::Obstacle
            && !matches!(
                self.subtype,
                CellSubtype::Lethal | CellSubtype::EnemyPosition
            )
    }
}

/// Per-scenario settings carried in the file header.
#[derive(Debug, Clone, PartialEq)]
pub struct ScenarioParams {
    pub energy_budget: f64,
    pub resource_budget: f64,
    pub cost_table: CostTable,
    pub visibility: VisibilityConfig,
}

impl Default for ScenarioParams {
    fn default() -> Self {
        Self {
            energy_budget: DEFAULT_BUDGET,
            resource_budget: DEFAULT_BUDGET,
            cost_table: CostTable::default(),
            visibility: VisibilityConfig::default(),
        }
    }
}

/// Energy and resource points left to a unit at some position.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct UnitState {
    pub position: Coord,
    pub energy: f64,
    pub resources: f64,
}

/// A single invariant violation found while building a map.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Violation {
    #[error("map must have at least one row and one column")]
    EmptyGrid,
    #[error("row {row} has {found} cells, expected {expected}")]
    RaggedRow {
        row: usize,
        found: usize,
        expected: usize,
    },
    #[error("header declares {key} = {declared} but the grid has {found}")]
    DimensionMismatch {
        key: &'static str,
        declared: usize,
        found: usize,
    },
    #[error("no unit start")]
    NoUnit,
    #[error("duplicate unit start at {0} (first at {1})")]
    DuplicateUnit(Coord, Coord),
    #[error("no target point")]
    NoTarget,
    #[error("duplicate target point at {0} (first at {1})")]
    DuplicateTarget(Coord, Coord),
    #[error("height {height} at {at} is outside [-3, 3]")]
    HeightOutOfRange { at: Coord, height: i64 },
    #[error("damage level {level} at {at} is outside [1, 100]")]
    DamageOutOfRange { at: Coord, level: i64 },
    #[error("{what} at {at} sits on an obstacle or lethal cell")]
    BlockedEndpoint { what: &'static str, at: Coord },
    #[error("invalid parameter {key}: {reason}")]
    InvalidParameter { key: String, reason: String },
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ScenarioError {
    #[error("syntax error at line {line}, column {column}: {message}")]
    Syntax {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("invalid scenario: {}", join_violations(.0))]
    Invalid(Vec<Violation>),
}

fn join_violations(v: &[Violation]) -> String {
    v.iter()
        .map(ToString::to_string)
        .collect::<Vec<_>>()
        .join("; ")
}

impl ScenarioError {
    pub fn violations(&self) -> &[Violation] {
        match self {
            ScenarioError::Invalid(v) => v,
            ScenarioError::Syntax { .. } => &[],
        }
    }
}

/// A validated battlefield. Immutable once built.
#[derive(Debug, Clone, PartialEq)]
pub struct ScenarioMap {
    width: usize,
    height_cells: usize,
    cells: Vec<Cell>,
    unit_start: Coord,
    target: Coord,
    enemies: Vec<Coord>,
    params: ScenarioParams,
}

impl ScenarioMap {
    /// Builds a map from a row-major grid, collecting every violated
    /// invariant instead of stopping at the first one.
    pub fn new(
        width: usize,
        height_cells: usize,
        cells: Vec<Cell>,
        params: ScenarioParams,
    ) -> Result<Self, ScenarioError> {
        let mut violations = Vec::new();
        if width == 0 || height_cells == 0 {
            return Err(ScenarioError::Invalid(vec![Violation::EmptyGrid]));
        }
        if cells.len() != width * height_cells {
            return Err(ScenarioError::Invalid(vec![Violation::DimensionMismatch {
                key: "cells",
                declared: width * height_cells,
                found: cells.len(),
            }]));
        }
        let mut unit = None;
        let mut target = None;
        let mut enemies = Vec::new();
        for (idx, cell) in cells.iter().enumerate() {
            let at = Coord::new(idx % width, idx / width);
            if !(MIN_HEIGHT..=MAX_HEIGHT).contains(&cell.height) {
                violations.push(Violation::HeightOutOfRange {
                    at,
                    height: cell.height.into(),
                });
            }
            match cell.subtype {
                CellSubtype::UnitStart => match unit {
                    None => unit = Some(at),
                    Some(first) => violations.push(Violation::DuplicateUnit(at, first)),
                },
                CellSubtype::TargetPoint => match target {
                    None => target = Some(at),
                    Some(first) => violations.push(Violation::DuplicateTarget(at, first)),
                },
                CellSubtype::EnemyPosition => enemies.push(at),
                CellSubtype::FireAffected(d) if d == 0 || d > MAX_DAMAGE => {
                    violations.push(Violation::DamageOutOfRange {
                        at,
                        level: d.into(),
                    })
                }
                _ => {}
            }
        }
        if unit.is_none() {
            violations.push(Violation::NoUnit);
        }
        if target.is_none() {
            violations.push(Violation::NoTarget);
        }
        for (what, at) in [("unit start", unit), ("target point", target)] {
            if let Some(at) = at {
                if cells[at.y * width + at.x].cell_type == CellType::Obstacle {
                    violations.push(Violation::BlockedEndpoint { what, at });
                }
            }
        }
        violations.extend(params_violations(&params));
        if !violations.is_empty() {
            return Err(ScenarioError::Invalid(violations));
        }
        Ok(Self {
            width,
            height_cells,
            cells,
            unit_start: unit.unwrap(),
            target: target.unwrap(),
            enemies,
            params,
        })
    }

    pub fn width(&self) -> usize {
        self.width
    }

    /// Number of rows.
    pub fn height_cells(&self) -> usize {
        self.height_cells
    }

    /// Total cell count.
    pub fn numc(&self) -> usize {
        self.cells.len()
    }

    pub fn cells(&self) -> &[Cell] {
        &self.cells
    }

    pub fn unit_start(&self) -> Coord {
        self.unit_start
    }

    pub fn target(&self) -> Coord {
        self.target
    }

    pub fn enemies(&self) -> &[Coord] {
        &self.enemies
    }

    pub fn params(&self) -> &ScenarioParams {
        &self.params
    }

    pub fn in_bounds(&self, c: Coord) -> bool {
        c.x < self.width && c.y < self.height_cells
    }

    pub fn index(&self, c: Coord) -> usize {
        c.y * self.width + c.x
    }

    pub fn coord(&self, index: usize) -> Coord {
        Coord::new(index % self.width, index / self.width)
    }

    pub fn cell(&self, c: Coord) -> &Cell {
        &self.cells[self.index(c)]
    }

    /// Full starting state of the unit.
    pub fn initial_state(&self) -> UnitState {
        UnitState {
            position: self.unit_start,
            energy: self.params.energy_budget,
            resources: self.params.resource_budget,
        }
    }

    /// Returns a copy with different header parameters.
    pub fn with_params(&self, params: ScenarioParams) -> Result<Self, ScenarioError> {
        Self::new(self.width, self.height_cells, self.cells.clone(), params)
    }

    /// Breadth-first reachability of the target over 8-connected traversable
    /// cells, ignoring budgets.
    pub fn target_reachable(&self) -> bool {
        let start = self.index(self.unit_start);
        let goal = self.index(self.target);
        let mut seen = vec![false; self.numc()];
        let mut queue = VecDeque::from([start]);
        seen[start] = true;
        while let Some(i) = queue.pop_front() {
            if i == goal {
                return true;
            }
            let c = self.coord(i);
            for n in neighbours8(c, self.width, self.height_cells) {
                let j = self.index(n);
                if !seen[j] && self.cells[j].is_traversable() {
                    seen[j] = true;
                    queue.push_back(j);
                }
            }
        }
        false
    }
}

fn params_violations(p: &ScenarioParams) -> Vec<Violation> {
    let mut out = Vec::new();
    let mut bad = |key: &str, reason: String| {
        out.push(Violation::InvalidParameter {
            key: key.to_string(),
            reason,
        })
    };
    for (key, v) in [
        ("energy_budget", p.energy_budget),
        ("resource_budget", p.resource_budget),
    ] {
        if !(v.is_finite() && v >= 0.0) {
            bad(key, format!("{v} is not a non-negative number"));
        }
    }
    if let Err(e) = p.cost_table.validate() {
        bad("cost table", e);
    }
    if let Err(e) = p.visibility.validate() {
        bad("visibility", e);
    }
    out
}

/// In-bounds 8-neighbourhood of `c`, in ascending row-major order.
pub fn neighbours8(c: Coord, width: usize, height: usize) -> impl Iterator<Item = Coord> {
    const OFFSETS: [(isize, isize); 8] = [
        (-1, -1),
        (0, -1),
        (1, -1),
        (-1, 0),
        (1, 0),
        (-1, 1),
        (0, 1),
        (1, 1),
    ];
    OFFSETS.into_iter().filter_map(move |(dx, dy)| {
        let x = c.x.checked_add_signed(dx)?;
        let y = c.y.checked_add_signed(dy)?;
        (x < width && y < height).then_some(Coord::new(x, y))
    })
}
