//! ASCII and SVG views of a map with an optional path overlay.

use std::fmt::Write as _;
use std::str::FromStr;

use thiserror::Error;

use crate::scenario::{CellSubtype, CellType, ScenarioMap};
use crate::visibility::{compute_zo, ZoField};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RenderFormat {
    Ascii,
    Svg,
}

impl FromStr for RenderFormat {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "ascii" => Ok(RenderFormat::Ascii),
            "svg" => Ok(RenderFormat::Svg),
            _ => Err(format!(
                "unknown render format `{s}` (expected ascii or svg)"
            )),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("path node {node} is outside a map of {numc} cells")]
pub struct RenderError {
    pub node: usize,
    pub numc: usize,
}

const CELL_PX: usize = 16;

/// Renders `path` (node indices) over `map`. Visibility is recomputed from
/// the map's own settings to mark hidden path cells.
pub fn render_path(
    map: &ScenarioMap,
    path: &[usize],
    format: RenderFormat,
) -> Result<String, RenderError> {
    if let Some(&node) = path.iter().find(|&&n| n >= map.numc()) {
        return Err(RenderError {
            node,
            numc: map.numc(),
        });
    }
    Ok(match format {
        RenderFormat::Ascii => ascii(map, path),
        RenderFormat::Svg => svg(map, path, &compute_zo(map, &map.params().visibility)),
    })
}

fn base_glyph(map: &ScenarioMap, index: usize) -> char {
    let cell = &map.cells()[index];
    match cell.subtype {
        CellSubtype::UnitStart => 'U',
        CellSubtype::TargetPoint => 'T',
        CellSubtype::EnemyPosition => 'E',
        CellSubtype::Lethal => 'X',
        CellSubtype::FireAffected(_) if cell.cell_type != CellType::Obstacle => '!',
        _ => match cell.cell_type {
            CellType::Normal => '.',
            CellType::Forest => 'f',
            CellType::Water => '~',
            CellType::Obstacle => '#',
        },
    }
}

fn ascii(map: &ScenarioMap, path: &[usize]) -> String {
    let mut on_path = vec![false; map.numc()];
    for &n in path {
        on_path[n] = true;
    }
    let mut out = String::new();
    for y in 0..map.height_cells() {
        for x in 0..map.width() {
            let i = y * map.width() + x;
            out.push(if on_path[i] { '*' } else { base_glyph(map, i) });
        }
        out.push('\n');
    }
    out.push_str(
        "legend: * path  U unit  T target  E enemy  X lethal  ! fire  \
         . open  f forest  ~ water  # obstacle\n",
    );
    out
}

fn terrain_fill(t: CellType, height: i8) -> String {
    let (r, g, b): (i32, i32, i32) = match t {
        CellType::Normal => (214, 204, 170),
        CellType::Forest => (96, 150, 86),
        CellType::Water => (92, 140, 204),
        CellType::Obstacle => (70, 70, 70),
    };
    // lighter uphill, darker downhill
    let shade = (height as i32 * 12).clamp(-60, 60);
    let c = |v: i32| (v + shade).clamp(0, 255);
    format!("rgb({},{},{})", c(r), c(g), c(b))
}

fn svg(map: &ScenarioMap, path: &[usize], zo: &ZoField) -> String {
    let (w, h) = (map.width(), map.height_cells());
    let mut out = String::new();
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{}" height="{}" viewBox="0 0 {} {}">"#,
        w * CELL_PX,
        h * CELL_PX,
        w * CELL_PX,
        h * CELL_PX
    );
    out.push_str(
        "<style>.cell{stroke:#444;stroke-width:0.3}.fire{fill:#d03020}\
         .path{fill:#111}.hidden{fill:none;stroke:#ddd;stroke-width:1.6}</style>\n",
    );
    for (i, cell) in map.cells().iter().enumerate() {
        let (x, y) = ((i % w) * CELL_PX, (i / w) * CELL_PX);
        let _ = writeln!(
            out,
            r#"<rect class="cell" x="{x}" y="{y}" width="{CELL_PX}" height="{CELL_PX}" fill="{}" data-height="{}"/>"#,
            terrain_fill(cell.cell_type, cell.height),
            cell.height
        );
        let level = cell.subtype.damage_level();
        if level > 0 {
            let _ = writeln!(
                out,
                r#"<rect class="fire" x="{x}" y="{y}" width="{CELL_PX}" height="{CELL_PX}" fill-opacity="{:.3}"/>"#,
                0.15 + 0.6 * (level as f64 / 100.0)
            );
        }
        let mark = match cell.subtype {
            CellSubtype::UnitStart => Some("U"),
            CellSubtype::TargetPoint => Some("T"),
            CellSubtype::EnemyPosition => Some("E"),
            CellSubtype::Lethal => Some("X"),
            _ => None,
        };
        if let Some(m) = mark {
            let _ = writeln!(
                out,
                r#"<text x="{}" y="{}" font-size="11" text-anchor="middle">{m}</text>"#,
                x + CELL_PX / 2,
                y + CELL_PX - 4
            );
        }
    }
    let half = CELL_PX / 2;
    for &n in path {
        let (x, y) = ((n % w) * CELL_PX, (n / w) * CELL_PX);
        if zo.get(n) >= 1.0 {
            let _ = writeln!(
                out,
                r#"<rect class="hidden" x="{}" y="{}" width="{}" height="{}"/>"#,
                x + 1,
                y + 1,
                CELL_PX - 2,
                CELL_PX - 2
            );
        }
        let _ = writeln!(
            out,
            r#"<circle class="path" data-node="{n}" cx="{}" cy="{}" r="3"/>"#,
            x + half,
            y + half
        );
    }
    out.push_str("</svg>\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scenario::parse_scenario;

    #[test]
    fn empty_path_bare_map() {
        let map = parse_scenario("N0:U F0 W0\nO0 N0:D30 N0:T\n").unwrap();
        let text = render_path(&map, &[], RenderFormat::Ascii).unwrap();
        assert!(text.starts_with("Uf~\n#!T\n"));
        let svg = render_path(&map, &[], RenderFormat::Svg).unwrap();
        assert_eq!(svg.matches(r#"class="cell""#).count(), 6);
        assert!(!svg.contains(r#"class="path""#));
    }

    #[test]
    fn two_node_path_marks_both() {
        let map = parse_scenario("N0:U N0:T").unwrap();
        let text = render_path(&map, &[0, 1], RenderFormat::Ascii).unwrap();
        assert!(text.starts_with("**\n"));
        let svg = render_path(&map, &[0, 1], RenderFormat::Svg).unwrap();
        assert_eq!(svg.matches(r#"class="path""#).count(), 2);
    }

    #[test]
    fn out_of_bounds() {
        let map = parse_scenario("N0:U N0:T").unwrap();
        assert_eq!(
            render_path(&map, &[0, 5], RenderFormat::Svg),
            Err(RenderError { node: 5, numc: 2 })
        );
    }

    #[test]
    fn format_names() {
        assert_eq!("SVG".parse(), Ok(RenderFormat::Svg));
        assert!("png".parse::<RenderFormat>().is_err());
    }
}
