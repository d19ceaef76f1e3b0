//! Seeded generators for the three benchmark map families.
//!
//! The maps are structural analogs: a river band with a forest patch, flat
//! ground with raised walls and a guarded target inside a fire zone, and a
//! mountainous map with two guarded peaks. Every generator is a pure
//! function of its seed.

use std::fmt;
use std::str::FromStr;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{Cell, CellSubtype, CellType, Coord, ScenarioMap, ScenarioParams};
use crate::visibility::VisibilityConfig;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Generator {
    RiverForest,
    Walls,
    Valleys,
}

impl Generator {
    pub const ALL: [Generator; 3] = [Generator::RiverForest, Generator::Walls, Generator::Valleys];

    pub fn generate(self, seed: u64) -> ScenarioMap {
        match self {
            Generator::RiverForest => generate_river_forest(seed),
            Generator::Walls => generate_walls(seed),
            Generator::Valleys => generate_valleys(seed),
        }
    }

    /// Colony size used for this family: `(iterations, ants)`.
    pub fn default_effort(self) -> (usize, usize) {
        match self {
            Generator::RiverForest => (500, 20),
            Generator::Walls => (1000, 30),
            Generator::Valleys => (2000, 70),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Generator::RiverForest => "river",
            Generator::Walls => "walls",
            Generator::Valleys => "valleys",
        }
    }
}

impl fmt::Display for Generator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Generator {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "river" | "river-forest" => Ok(Generator::RiverForest),
            "walls" => Ok(Generator::Walls),
            "valleys" => Ok(Generator::Valleys),
            _ => Err(format!("unknown generator `{s}` (river, walls, valleys)")),
        }
    }
}

struct Grid {
    width: usize,
    height: usize,
    cells: Vec<Cell>,
}

impl Grid {
    fn new(width: usize, height: usize) -> Self {
        Self {
            width,
            height,
            cells: vec![Cell::new(CellType::Normal, 0); width * height],
        }
    }

    fn at(&mut self, c: Coord) -> &mut Cell {
        &mut self.cells[c.y * self.width + c.x]
    }

    fn get(&self, c: Coord) -> &Cell {
        &self.cells[c.y * self.width + c.x]
    }

    fn coords(&self) -> impl Iterator<Item = Coord> {
        let w = self.width;
        (0..self.width * self.height).map(move |i| Coord::new(i % w, i / w))
    }

    fn finish(self, params: ScenarioParams) -> ScenarioMap {
        ScenarioMap::new(self.width, self.height, self.cells, params)
            .expect("generator produced an invalid map")
    }
}

fn rng_for(seed: u64, salt: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed ^ salt.wrapping_mul(0x9E37_79B9_7F4A_7C15))
}

/// 15x15, no enemies. A two-cell-wide river meanders between the unit
/// (south-west) and the target (north-east) with a single ford, and a forest
/// patch grows on each bank near the direct route.
pub fn generate_river_forest(seed: u64) -> ScenarioMap {
    const N: usize = 15;
    let mut rng = rng_for(seed, 1);
    let mut g = Grid::new(N, N);
    let start = Coord::new(1 + rng.gen_range(0..2), N - 2 - rng.gen_range(0..2));
    let target = Coord::new(N - 2 - rng.gen_range(0..2), 1 + rng.gen_range(0..2));

    // Gentle relief.
    for c in g.coords().collect::<Vec<_>>() {
        if rng.gen_bool(0.12) {
            g.at(c).height = 1;
        }
    }

    let mut cx = 6 + rng.gen_range(0..2) as i64;
    // The ford sits off the diagonal, so wading straight across competes
    // with walking round to it.
    let ford_row = if rng.gen_bool(0.5) {
        rng.gen_range(1..4)
    } else {
        rng.gen_range(N - 4..N - 1)
    };
    for y in 0..N {
        cx = (cx + rng.gen_range(-1..=1)).clamp(5, 8);
        for x in [cx as usize, cx as usize + 1] {
            let cell = g.at(Coord::new(x, y));
            *cell = if y == ford_row {
                Cell::new(CellType::Normal, 0)
            } else {
                Cell::new(CellType::Water, -1)
            };
        }
    }

    // One forest patch on each bank, each grown from a seed cell near the
    // diagonal between unit and target.
    let can_grow = |g: &Grid, c: Coord| {
        g.get(c).cell_type == CellType::Normal
            && c.chebyshev(start) > 1
            && c.chebyshev(target) > 1
            && c.x > 0
            && c.y > 0
            && c.x < N - 1
            && c.y < N - 1
    };
    let seeds = [
        Coord::new(3 + rng.gen_range(0..2), 7 + rng.gen_range(0..3)),
        Coord::new(10 + rng.gen_range(0..2), 4 + rng.gen_range(0..3)),
    ];
    for seed_cell in seeds {
        let size = 9 + rng.gen_range(0..5);
        let mut patch = vec![seed_cell];
        g.at(seed_cell).cell_type = CellType::Forest;
        while patch.len() < size {
            let from = *patch.choose(&mut rng).unwrap();
            let next = super::neighbours8(from, N, N)
                .filter(|&c| can_grow(&g, c))
                .collect::<Vec<_>>();
            if let Some(&c) = next.choose(&mut rng) {
                g.at(c).cell_type = CellType::Forest;
                patch.push(c);
            } else if patch
                .iter()
                .all(|&p| super::neighbours8(p, N, N).all(|c| !can_grow(&g, c)))
            {
                break;
            }
        }
    }

    *g.at(start) = Cell::new(CellType::Normal, 0).with_subtype(CellSubtype::UnitStart);
    *g.at(target) = Cell::new(CellType::Normal, 0).with_subtype(CellSubtype::TargetPoint);
    g.finish(ScenarioParams {
        visibility: VisibilityConfig {
            zo_decay: 0.1,
            ..VisibilityConfig::default()
        },
        ..ScenarioParams::default()
    })
}

/// Fire damage for Chebyshev ring `r` (1-based) around an enemy. Rings are
/// banded so that every cell of an inner ring is hit harder than any cell of
/// an outer ring.
/// Euclidean distance from `c` to the segment between `a` and `b`.
fn segment_distance(c: Coord, a: Coord, b: Coord) -> f64 {
    let (px, py) = (c.x as f64 - a.x as f64, c.y as f64 - a.y as f64);
    let (dx, dy) = (b.x as f64 - a.x as f64, b.y as f64 - a.y as f64);
    let t = ((px * dx + py * dy) / (dx * dx + dy * dy)).clamp(0.0, 1.0);
    (px - t * dx).hypot(py - t * dy)
}

fn ring_damage(r: usize, rings: usize, jitter: u8) -> u8 {
    let step = 90 / rings;
    (100 - step * (r - 1) - step / 2) as u8 - jitter.min((step / 2) as u8)
}

/// 30x30 flat ground with raised walls. One enemy stands a few cells east
/// of the target and the ground around it is under graded fire. The direct
/// northward run from the unit is open to the enemy; a long wall west of it
/// shelters a corridor of about the same length, and short wall stubs in the
/// east add texture.
pub fn generate_walls(seed: u64) -> ScenarioMap {
    const N: usize = 30;
    const FIRE_RINGS: usize = 3;
    let mut rng = rng_for(seed, 2);
    let mut g = Grid::new(N, N);
    let tx = 10 + rng.gen_range(0..2);
    let target = Coord::new(tx, 3 + rng.gen_range(0..2));
    let start = Coord::new(tx - 1 + rng.gen_range(0..3), N - 3 - rng.gen_range(0..2));
    let enemy = Coord::new(tx + 4 + rng.gen_range(0..2), 2 + rng.gen_range(0..2));

    let mut walls: Vec<(Coord, (i64, i64), usize)> = Vec::new();
    // The shield runs beside the direct route, ending a few rows short of
    // the unit so the sheltered strip behind it can be entered diagonally.
    let shield_top = target.y + 2;
    let shield_len = start.y - 4 - rng.gen_range(0..3) - shield_top;
    walls.push((Coord::new(tx - 2, shield_top), (0, 1), shield_len));
    for _ in 0..4 {
        let origin = Coord::new(rng.gen_range(tx + 7..N - 2), rng.gen_range(8..N - 4));
        let dir = *[(1, 0), (0, 1), (1, 1), (1, -1)].choose(&mut rng).unwrap();
        walls.push((origin, dir, 3 + rng.gen_range(0..3)));
    }
    for (origin, (dx, dy), len) in walls {
        let height = 2 + rng.gen_range(0..2);
        for k in 0..len as i64 {
            let x = origin.x as i64 + dx * k;
            let y = origin.y as i64 + dy * k;
            if x < 0 || y < 0 || x >= N as i64 || y >= N as i64 {
                break;
            }
            let c = Coord::new(x as usize, y as usize);
            if c.chebyshev(start) > 1 && c.chebyshev(enemy) > FIRE_RINGS {
                g.at(c).height = height;
            }
        }
    }

    for c in g.coords().collect::<Vec<_>>() {
        let r = c.chebyshev(enemy);
        if (1..=FIRE_RINGS).contains(&r) {
            let d = ring_damage(r, FIRE_RINGS, rng.gen_range(0..4));
            g.at(c).subtype = CellSubtype::FireAffected(d);
        }
    }

    g.at(start).subtype = CellSubtype::UnitStart;
    *g.at(enemy) = Cell::new(CellType::Normal, 0).with_subtype(CellSubtype::EnemyPosition);
    *g.at(target) = Cell::new(CellType::Normal, 0).with_subtype(CellSubtype::TargetPoint);
    let params = ScenarioParams {
        visibility: VisibilityConfig {
            zo_decay: 1.0,
            ..VisibilityConfig::default()
        },
        ..ScenarioParams::default()
    };
    g.finish(params)
}

/// 45x45 mountains and valleys, a single terrain type. Two enemies hold two
/// hill tops under fire cover; the target lies just past the north-eastern
/// one as seen from the unit. A southern and an eastern ridge shade a long
/// valley route, while the flat direct diagonal stays in view of both hills.
pub fn generate_valleys(seed: u64) -> ScenarioMap {
    const N: usize = 45;
    const FIRE_RINGS: usize = 3;
    let mut rng = rng_for(seed, 3);
    let start = Coord::new(3 + rng.gen_range(0..3), N - 4 - rng.gen_range(0..3));
    let peak_a = Coord::new(N - 12 - rng.gen_range(0..3), 10 + rng.gen_range(0..3));
    let peak_b = Coord::new(13 + rng.gen_range(0..4), 15 + rng.gen_range(0..4));
    let target = Coord::new(peak_a.x + 4, peak_a.y - 4);
    let ridge_x = peak_a.x + 6;
    let ridge_y = start.y - 3 - rng.gen_range(0..2);
    let ridge_top = peak_a.y - 2;

    // (centre, amplitude, sigma)
    let mut bumps: Vec<((f64, f64), f64, f64)> = vec![
        ((peak_a.x as f64, peak_a.y as f64), 2.6, 3.0),
        ((peak_b.x as f64, peak_b.y as f64), 2.6, 3.0),
    ];
    let mut placed = 0;
    while placed < 4 {
        let c = Coord::new(rng.gen_range(6..ridge_x - 4), rng.gen_range(6..ridge_y - 4));
        if c.chebyshev(peak_a) < 7
            || c.chebyshev(peak_b) < 7
            || c.chebyshev(target) < 5
            || segment_distance(c, start, target) < 7.0
        {
            continue;
        }
        bumps.push((
            (c.x as f64, c.y as f64),
            4.0 + rng.gen::<f64>(),
            2.5 + rng.gen::<f64>(),
        ));
        placed += 1;
    }
    let mut dips = 0;
    while dips < 4 {
        let c = Coord::new(rng.gen_range(4..N - 4), rng.gen_range(4..N - 4));
        if c.chebyshev(peak_a) < 9
            || c.chebyshev(peak_b) < 9
            || segment_distance(c, start, target) < 8.0
        {
            continue;
        }
        bumps.push((
            (c.x as f64, c.y as f64),
            -(3.0 + rng.gen::<f64>()),
            3.0 + rng.gen::<f64>(),
        ));
        dips += 1;
    }

    let mut g = Grid::new(N, N);
    for c in g.coords().collect::<Vec<_>>() {
        let z: f64 = bumps
            .iter()
            .map(|&((bx, by), amp, sigma)| {
                let d2 = (c.x as f64 - bx).powi(2) + (c.y as f64 - by).powi(2);
                amp * (-d2 / (2.0 * sigma * sigma)).exp()
            })
            .sum();
        let mut h = z.round().clamp(-3.0, 3.0) as i8;
        // the shaded valley floor stays below the ridges
        if c.y > ridge_y || (c.x > ridge_x && c.y >= ridge_top) {
            h = h.min(1);
        }
        g.at(c).height = h;
    }
    for x in start.x + 2..=ridge_x {
        g.at(Coord::new(x, ridge_y)).height = 3;
    }
    for y in ridge_top..=ridge_y {
        g.at(Coord::new(ridge_x, y)).height = 3;
    }
    for peak in [peak_a, peak_b] {
        for c in g.coords().collect::<Vec<_>>() {
            if c.chebyshev(peak) <= 2 {
                let cell = g.at(c);
                cell.height = cell.height.clamp(0, 2);
            }
        }
        *g.at(peak) = Cell::new(CellType::Normal, 2).with_subtype(CellSubtype::EnemyPosition);
    }
    for c in g.coords().collect::<Vec<_>>() {
        let r = c.chebyshev(peak_a).min(c.chebyshev(peak_b));
        if (1..=FIRE_RINGS).contains(&r) {
            let d = ring_damage(r, FIRE_RINGS, rng.gen_range(0..4));
            g.at(c).subtype = CellSubtype::FireAffected(d);
        }
    }
    for (c, st) in [
        (start, CellSubtype::UnitStart),
        (target, CellSubtype::TargetPoint),
    ] {
        *g.at(c) = Cell::new(CellType::Normal, g.get(c).height.min(1)).with_subtype(st);
    }
    let params = ScenarioParams {
        visibility: VisibilityConfig {
            zo_decay: 1.0,
            ..VisibilityConfig::default()
        },
        ..ScenarioParams::default()
    };
    g.finish(params)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ring_damage_bands_do_not_overlap() {
        for r in 1..5 {
            let weakest_inner = ring_damage(r, 5, u8::MAX);
            let strongest_outer = ring_damage(r + 1, 5, 0);
            assert!(weakest_inner > strongest_outer, "ring {r}");
        }
        assert!(ring_damage(5, 5, u8::MAX) >= 1);
        assert!(ring_damage(1, 5, 0) <= 100);
    }

    #[test]
    fn generator_names() {
        for g in Generator::ALL {
            assert_eq!(g.name().parse::<Generator>().unwrap(), g);
        }
        assert!("swamp".parse::<Generator>().is_err());
    }

    #[test]
    fn sizes_and_enemies() {
        for seed in 0..5 {
            let m = generate_river_forest(seed);
            assert_eq!((m.numc(), m.enemies().len()), (225, 0));
            let m = generate_walls(seed);
            assert_eq!((m.numc(), m.enemies().len()), (900, 1));
            let m = generate_valleys(seed);
            assert_eq!((m.numc(), m.enemies().len()), (2025, 2));
        }
    }
}
