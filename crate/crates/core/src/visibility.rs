//! Line of sight and the hiddenness score `ZO`.
//!
//! Sight lines are supercover walks between cell centres: every cell whose
//! square the segment touches, including both side cells when the segment
//! passes exactly through a corner. An intermediate cell blocks sight when it
//! is an obstacle, a forest, or higher than both endpoints.

use crate::scenario::{CellType, Coord, ScenarioMap};

#[derive(Debug, Clone, PartialEq)]
pub struct VisibilityConfig {
    /// Chebyshev radius of the observer neighbourhood used when the map has
    /// no enemies.
    pub zo_radius: usize,
    /// Exponential decay per observer.
    pub zo_decay: f64,
}

impl Default for VisibilityConfig {
    fn default() -> Self {
        Self {
            zo_radius: 10,
            zo_decay: 0.35,
        }
    }
}

impl VisibilityConfig {
    pub fn validate(&self) -> Result<(), String> {
        if self.zo_radius < 1 {
            return Err("zo_radius must be at least 1".into());
        }
        if !(self.zo_decay.is_finite() && self.zo_decay > 0.0) {
            return Err(format!("zo_decay must be positive, got {}", self.zo_decay));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, thiserror::Error)]
#[error("coordinate {0} is outside the map")]
pub struct OutOfBounds(pub Coord);

/// Cells covered by the segment between the centres of `from` and `to`,
/// endpoints included, ordered from `from`.
pub fn supercover(from: Coord, to: Coord) -> Vec<Coord> {
    let dx = to.x as i64 - from.x as i64;
    let dy = to.y as i64 - from.y as i64;
    let (nx, ny) = (dx.abs(), dy.abs());
    let (sx, sy) = (dx.signum(), dy.signum());
    let (mut x, mut y) = (from.x as i64, from.y as i64);
    let mut out = Vec::with_capacity((nx + ny + 1) as usize);
    out.push(from);
    let (mut ix, mut iy) = (0i64, 0i64);
    while ix < nx || iy < ny {
        // Compare the parameters at which the segment crosses the next
        // vertical and horizontal cell borders.
        let decision = (1 + 2 * ix) * ny - (1 + 2 * iy) * nx;
        if decision == 0 {
            out.push(Coord::new((x + sx) as usize, y as usize));
            out.push(Coord::new(x as usize, (y + sy) as usize));
            x += sx;
            y += sy;
            ix += 1;
            iy += 1;
        } else if decision < 0 {
            x += sx;
            ix += 1;
        } else {
            y += sy;
            iy += 1;
        }
        out.push(Coord::new(x as usize, y as usize));
    }
    out
}

fn blocks(map: &ScenarioMap, c: Coord, ceiling: i8) -> bool {
    let cell = map.cell(c);
    matches!(cell.cell_type, CellType::Obstacle | CellType::Forest) || cell.height > ceiling
}

pub fn line_of_sight(map: &ScenarioMap, from: Coord, to: Coord) -> Result<bool, OutOfBounds> {
    for c in [from, to] {
        if !map.in_bounds(c) {
            return Err(OutOfBounds(c));
        }
    }
    Ok(los_unchecked(map, from, to))
}

fn los_unchecked(map: &ScenarioMap, from: Coord, to: Coord) -> bool {
    if from.chebyshev(to) <= 1 {
        return true;
    }
    let ceiling = map.cell(from).height.max(map.cell(to).height);
    supercover(from, to)
        .into_iter()
        .filter(|&c| c != from && c != to)
        .all(|c| !blocks(map, c, ceiling))
}

/// Per-cell hiddenness score in `[0, 1]`, row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct ZoField {
    width: usize,
    scores: Vec<f64>,
    observers: Vec<u32>,
}

impl ZoField {
    pub fn get(&self, node: usize) -> f64 {
        self.scores[node]
    }

    pub fn at(&self, c: Coord) -> f64 {
        self.scores[c.y * self.width + c.x]
    }

    /// Number of observers that see each cell.
    pub fn observer_count(&self, node: usize) -> u32 {
        self.observers[node]
    }

    pub fn scores(&self) -> &[f64] {
        &self.scores
    }

    /// Builds a field directly from scores, e.g. for hand-made test states.
    pub fn from_scores(width: usize, scores: Vec<f64>) -> Self {
        let observers = vec![0; scores.len()];
        Self {
            width,
            scores,
            observers,
        }
    }

    pub fn len(&self) -> usize {
        self.scores.len()
    }

    pub fn is_empty(&self) -> bool {
        self.scores.is_empty()
    }
}

/// `ZO(j) = exp(-decay * s(j))` where `s(j)` counts the observers with line
/// of sight to `j`. Observers are the enemies, or when there are none, every
/// other non-obstacle cell within `zo_radius`.
pub fn compute_zo(map: &ScenarioMap, cfg: &VisibilityConfig) -> ZoField {
    let (w, h) = (map.width(), map.height_cells());
    let mut observers = vec![0u32; map.numc()];
    for (j, count) in observers.iter_mut().enumerate() {
        let cj = map.coord(j);
        *count = if map.enemies().is_empty() {
            let r = cfg.zo_radius;
            let (x0, x1) = (cj.x.saturating_sub(r), (cj.x + r).min(w - 1));
            let (y0, y1) = (cj.y.saturating_sub(r), (cj.y + r).min(h - 1));
            let mut s = 0;
            for y in y0..=y1 {
                for x in x0..=x1 {
                    let o = Coord::new(x, y);
                    if o != cj
                        && map.cell(o).cell_type != CellType::Obstacle
                        && los_unchecked(map, o, cj)
                    {
                        s += 1;
                    }
                }
            }
            s
        } else {
            map.enemies()
                .iter()
                .filter(|&&e| los_unchecked(map, e, cj))
                .count() as u32
        };
    }
    let scores = observers
        .iter()
        .map(|&s| (-cfg.zo_decay * f64::from(s)).exp())
        .collect();
    ZoField {
        width: w,
        scores,
        observers,
    }
}
