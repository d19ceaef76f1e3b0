//! Shared strategies and brute-force reference implementations.
#![allow(dead_code)]

use chac::costgraph::CostGraph;
use chac::scenario::{Cell, CellSubtype, CellType, Coord, ScenarioMap, ScenarioParams};
use chac::visibility::{VisibilityConfig, ZoField};
use chac::{CostTable, SolutionPath};
use proptest::prelude::*;
use rand::seq::SliceRandom;
use rand::Rng;

pub fn cell_strategy() -> impl Strategy<Value = Cell> {
    let kind = prop_oneof![
        6 => Just(CellType::Normal),
        2 => Just(CellType::Forest),
        1 => Just(CellType::Water),
        2 => Just(CellType::Obstacle),
    ];
    let sub = prop_oneof![
        8 => Just(CellSubtype::None),
        2 => (1u8..=100).prop_map(CellSubtype::FireAffected),
        1 => Just(CellSubtype::Lethal),
    ];
    (kind, -3i8..=3, sub).prop_map(|(t, h, s)| Cell::new(t, h).with_subtype(s))
}

/// Random valid maps up to `max`×`max`, with 0–2 enemies.
pub fn map_strategy(max: usize) -> impl Strategy<Value = ScenarioMap> {
    (2..=max, 2..=max)
        .prop_flat_map(|(w, h)| {
            (
                Just(w),
                Just(h),
                proptest::collection::vec(cell_strategy(), w * h),
                proptest::sample::subsequence((0..w * h).collect::<Vec<_>>(), 2..=4),
                any::<proptest::sample::Index>(),
            )
        })
        .prop_map(|(w, h, mut cells, picks, shuffle)| {
            let mut picks = picks;
            let k = shuffle.index(picks.len());
            picks.rotate_left(k);
            cells[picks[0]] = Cell::new(CellType::Normal, cells[picks[0]].height)
                .with_subtype(CellSubtype::UnitStart);
            cells[picks[1]] = Cell::new(CellType::Normal, cells[picks[1]].height)
                .with_subtype(CellSubtype::TargetPoint);
            for &e in &picks[2..] {
                cells[e] = cells[e].with_subtype(CellSubtype::EnemyPosition);
            }
            ScenarioMap::new(w, h, cells, ScenarioParams::default())
                .expect("strategy builds valid maps")
        })
}

/// Same as [`map_strategy`] but drawn from a plain RNG, for seeded loops.
pub fn random_map<R: Rng>(
    rng: &mut R,
    w: usize,
    h: usize,
    obstacle_p: f64,
    enemies: usize,
) -> ScenarioMap {
    let mut cells: Vec<Cell> = (0..w * h)
        .map(|_| {
            let t = match rng.gen_range(0..100) {
                x if (x as f64) < obstacle_p * 100.0 => CellType::Obstacle,
                x if x < 70 => CellType::Normal,
                x if x < 88 => CellType::Forest,
                _ => CellType::Water,
            };
            let mut c = Cell::new(t, rng.gen_range(-2..=2));
            if rng.gen_bool(0.15) {
                c.subtype = CellSubtype::FireAffected(rng.gen_range(1..=100));
            }
            c
        })
        .collect();
    let mut idx: Vec<usize> = (0..w * h).collect();
    idx.shuffle(rng);
    cells[idx[0]] = Cell::new(CellType::Normal, 0).with_subtype(CellSubtype::UnitStart);
    cells[idx[1]] = Cell::new(CellType::Normal, 0).with_subtype(CellSubtype::TargetPoint);
    for &e in &idx[2..2 + enemies] {
        cells[e] = cells[e].with_subtype(CellSubtype::EnemyPosition);
    }
    ScenarioMap::new(w, h, cells, ScenarioParams::default()).unwrap()
}

/// Whether the closed segment between the centres of `a` and `b` meets the
/// closed unit square of `c`. Exact: works on doubled integer coordinates.
pub fn segment_touches_cell(a: Coord, b: Coord, c: Coord) -> bool {
    let p = (2 * a.x as i64, 2 * a.y as i64);
    let q = (2 * b.x as i64, 2 * b.y as i64);
    let (lo_x, hi_x) = (2 * c.x as i64 - 1, 2 * c.x as i64 + 1);
    let (lo_y, hi_y) = (2 * c.y as i64 - 1, 2 * c.y as i64 + 1);
    if p.0.max(q.0) < lo_x || p.0.min(q.0) > hi_x || p.1.max(q.1) < lo_y || p.1.min(q.1) > hi_y {
        return false;
    }
    let d = (q.0 - p.0, q.1 - p.1);
    let side = |x: i64, y: i64| (d.0 * (y - p.1) - d.1 * (x - p.0)).signum();
    let s = [
        side(lo_x, lo_y),
        side(lo_x, hi_y),
        side(hi_x, lo_y),
        side(hi_x, hi_y),
    ];
    !(s.iter().all(|&v| v > 0) || s.iter().all(|&v| v < 0))
}

/// Line of sight by scanning every cell of the map against the segment.
pub fn brute_los(map: &ScenarioMap, a: Coord, b: Coord) -> bool {
    if a.chebyshev(b) <= 1 {
        return true;
    }
    let ceiling = map.cell(a).height.max(map.cell(b).height);
    for y in 0..map.height_cells() {
        for x in 0..map.width() {
            let c = Coord::new(x, y);
            if c == a || c == b || !segment_touches_cell(a, b, c) {
                continue;
            }
            let cell = map.cell(c);
            if matches!(cell.cell_type, CellType::Obstacle | CellType::Forest)
                || cell.height > ceiling
            {
                return false;
            }
        }
    }
    true
}

pub fn brute_observers(map: &ScenarioMap, cfg: &VisibilityConfig, j: Coord) -> u32 {
    let mut s = 0;
    if map.enemies().is_empty() {
        for y in 0..map.height_cells() {
            for x in 0..map.width() {
                let o = Coord::new(x, y);
                if o != j
                    && o.chebyshev(j) <= cfg.zo_radius
                    && map.cell(o).cell_type != CellType::Obstacle
                    && brute_los(map, o, j)
                {
                    s += 1;
                }
            }
        }
    } else {
        for &e in map.enemies() {
            if brute_los(map, e, j) {
                s += 1;
            }
        }
    }
    s
}

pub fn brute_zo(map: &ScenarioMap, cfg: &VisibilityConfig) -> Vec<f64> {
    (0..map.numc())
        .map(|i| (-cfg.zo_decay * brute_observers(map, cfg, map.coord(i)) as f64).exp())
        .collect()
}

/// `(Cr, Ce)` of stepping from `a` onto `b`, straight from the cell data.
pub fn step_costs(map: &ScenarioMap, table: &CostTable, a: Coord, b: Coord) -> (f64, f64) {
    let (from, to) = (map.cell(a), map.cell(b));
    let per = |p: &chac::costgraph::PerTerrain| match to.cell_type {
        CellType::Normal => p.normal,
        CellType::Forest => p.forest,
        CellType::Water => p.water,
        CellType::Obstacle => f64::NAN,
    };
    let dh = f64::from(to.height) - f64::from(from.height);
    let slope = if dh > 0.0 {
        table.up_slope_factor * dh
    } else {
        table.down_slope_factor * -dh
    };
    let damage = match to.subtype {
        CellSubtype::FireAffected(d) => f64::from(d),
        _ => 0.0,
    };
    (
        per(&table.resource_cost) + slope,
        per(&table.nocombat_energy) + table.fire_energy_scale * damage,
    )
}

/// Path objectives folded directly over the cells.
pub fn fold_objectives(
    map: &ScenarioMap,
    zo: &[f64],
    nodes: &[usize],
    speed_vis: f64,
    safety_vis: f64,
) -> (f64, f64) {
    let table = &map.params().cost_table;
    nodes.windows(2).fold((0.0, 0.0), |(ff, fs), w| {
        let (a, b) = (map.coord(w[0]), map.coord(w[1]));
        let (cr, ce) = step_costs(map, table, a, b);
        let hidden = zo[w[1]];
        (
            ff + cr + speed_vis * (1.0 - hidden),
            fs + ce + safety_vis * (1.0 - hidden),
        )
    })
}

pub fn weakly_better(a: (f64, f64), b: (f64, f64)) -> bool {
    a.0 <= b.0 && a.1 <= b.1 && (a.0 < b.0 || a.1 < b.1)
}

/// Stream order filter: keep what nothing in the stream dominates, once per
/// objective vector.
pub fn brute_front(stream: &[(f64, f64)]) -> Vec<usize> {
    let mut out: Vec<usize> = Vec::new();
    for (i, &p) in stream.iter().enumerate() {
        let dominated = stream.iter().any(|&q| weakly_better(q, p));
        let seen = stream[..i].contains(&p);
        if !dominated && !seen {
            out.push(i);
        }
    }
    out
}

pub fn tagged(i: usize, (ff, fs): (f64, f64)) -> SolutionPath {
    SolutionPath {
        nodes: vec![i],
        ff,
        fs,
    }
}

/// Random simple path from start to target by randomized depth-first search,
/// ignoring budgets.
pub fn random_simple_path<R: Rng>(graph: &CostGraph, rng: &mut R) -> Option<Vec<usize>> {
    let mut visited = vec![false; graph.numc()];
    let mut stack = vec![(graph.start(), {
        let mut n: Vec<usize> = graph.out_edges(graph.start()).map(|(_, e)| e.to).collect();
        n.shuffle(rng);
        n
    })];
    visited[graph.start()] = true;
    while let Some((node, pending)) = stack.last_mut() {
        if *node == graph.target() {
            return Some(stack.iter().map(|(n, _)| *n).collect());
        }
        match pending.pop() {
            Some(next) if !visited[next] => {
                visited[next] = true;
                let mut n: Vec<usize> = graph.out_edges(next).map(|(_, e)| e.to).collect();
                n.shuffle(rng);
                stack.push((next, n));
            }
            Some(_) => {}
            None => {
                stack.pop();
            }
        }
    }
    None
}

pub fn zo_scores(z: &ZoField) -> Vec<f64> {
    z.scores().to_vec()
}
