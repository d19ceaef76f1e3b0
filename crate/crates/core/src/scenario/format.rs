//! Plain-text scenario files.
//!
//! A file is a block of `key = value` header lines followed by the grid, one
//! row per line, cells separated by whitespace. Blank lines and lines
//! starting with `#` are ignored everywhere. A cell token is
//! `<type><height>[:<subtype>]`:
//!
//! ```text
//! width = 3
//! zo_radius = 10
//!
//! N0:U  F1:D40  W-1
//! O0    N2      N0:T
//! ```
//!
//! Type letters are `N`, `F`, `W`, `O`; subtypes are `U` (unit), `E`
//! (enemy), `T` (target), `L` (lethal) and `D<n>` (fire damage `n`).
//! `width` and `height` are optional and only checked against the grid.

use std::collections::HashSet;
use std::fmt::Write as _;

use super::{
    Cell, CellSubtype, CellType, Coord, ScenarioError, ScenarioMap, ScenarioParams, Violation,
    MAX_DAMAGE, MAX_HEIGHT, MIN_HEIGHT,
};

fn syntax(line: usize, column: usize, message: impl Into<String>) -> ScenarioError {
    ScenarioError::Syntax {
        line,
        column,
        message: message.into(),
    }
}

pub fn parse_scenario(text: &str) -> Result<ScenarioMap, ScenarioError> {
    let mut params = ScenarioParams::default();
    let mut declared_width = None;
    let mut declared_height = None;
    let mut seen_keys = HashSet::new();
    let mut rows: Vec<Vec<Cell>> = Vec::new();
    let mut token_violations = Vec::new();

    for (lineno, raw) in text.lines().enumerate() {
        let line_no = lineno + 1;
        let trimmed = raw.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        if let Some((key, value)) = trimmed.split_once('=') {
            if !rows.is_empty() {
                return Err(syntax(line_no, 1, "header line after the grid"));
            }
            let key = key.trim();
            let value = value.trim();
            if !seen_keys.insert(key.to_string()) {
                return Err(syntax(line_no, 1, format!("duplicate key `{key}`")));
            }
            let value_col = raw.find('=').unwrap() + 2;
            apply_header(
                key,
                value,
                &mut params,
                &mut declared_width,
                &mut declared_height,
            )
            .map_err(|msg| syntax(line_no, value_col, msg))?;
            continue;
        }

        let y = rows.len();
        let mut row = Vec::new();
        for (col, token) in tokens_with_columns(raw) {
            let at = Coord::new(row.len(), y);
            let cell = parse_token(token, at, &mut token_violations)
                .map_err(|msg| syntax(line_no, col, msg))?;
            row.push(cell);
        }
        rows.push(row);
    }

    if rows.is_empty() {
        return Err(ScenarioError::Invalid(vec![Violation::EmptyGrid]));
    }
    let width = rows[0].len();
    let mut violations = token_violations;
    for (y, row) in rows.iter().enumerate() {
        if row.len() != width {
            violations.push(Violation::RaggedRow {
                row: y,
                found: row.len(),
                expected: width,
            });
        }
    }
    if let Some(w) = declared_width.filter(|&w| w != width) {
        violations.push(Violation::DimensionMismatch {
            key: "width",
            declared: w,
            found: width,
        });
    }
    if let Some(h) = declared_height.filter(|&h| h != rows.len()) {
        violations.push(Violation::DimensionMismatch {
            key: "height",
            declared: h,
            found: rows.len(),
        });
    }
    if violations
        .iter()
        .any(|v| matches!(v, Violation::RaggedRow { .. }))
    {
        return Err(ScenarioError::Invalid(violations));
    }

    let height = rows.len();
    let cells: Vec<Cell> = rows.into_iter().flatten().collect();
    match ScenarioMap::new(width, height, cells, params) {
        Ok(map) if violations.is_empty() => Ok(map),
        Ok(_) => Err(ScenarioError::Invalid(violations)),
        Err(ScenarioError::Invalid(more)) => {
            violations.extend(more);
            Err(ScenarioError::Invalid(violations))
        }
        Err(e) => Err(e),
    }
}

/// Whitespace-separated tokens with their 1-based character column.
fn tokens_with_columns(line: &str) -> impl Iterator<Item = (usize, &str)> {
    let mut start = None;
    let mut out = Vec::new();
    for (i, ch) in line
        .char_indices()
        .chain(std::iter::once((line.len(), ' ')))
    {
        match (ch.is_whitespace(), start) {
            (false, None) => start = Some(i),
            (true, Some(s)) => {
                out.push((line[..s].chars().count() + 1, &line[s..i]));
                start = None;
            }
            _ => {}
        }
    }
    out.into_iter()
}

/// Parses one cell. Range problems are recorded as violations and the value
/// clamped so parsing can continue; malformed tokens are syntax errors.
fn parse_token(token: &str, at: Coord, violations: &mut Vec<Violation>) -> Result<Cell, String> {
    let (body, subtype) = match token.split_once(':') {
        Some((b, s)) => (b, Some(s)),
        None => (token, None),
    };
    let mut chars = body.chars();
    let letter = chars.next().ok_or("empty cell token")?;
    let cell_type = CellType::from_letter(letter)
        .ok_or_else(|| format!("unknown cell type `{letter}` in `{token}`"))?;
    let height_text = chars.as_str();
    if height_text.is_empty() {
        return Err(format!("missing height in `{token}`"));
    }
    let height: i64 = height_text
        .parse()
        .map_err(|_| format!("bad height `{height_text}` in `{token}`"))?;
    if height < MIN_HEIGHT.into() || height > MAX_HEIGHT.into() {
        violations.push(Violation::HeightOutOfRange { at, height });
    }
    let height = height.clamp(MIN_HEIGHT.into(), MAX_HEIGHT.into()) as i8;

    let subtype = match subtype {
        None => CellSubtype::None,
        Some("U") => CellSubtype::UnitStart,
        Some("E") => CellSubtype::EnemyPosition,
        Some("T") => CellSubtype::TargetPoint,
        Some("L") => CellSubtype::Lethal,
        Some(s) if s.starts_with('D') => {
            let level: i64 = s[1..]
                .parse()
                .map_err(|_| format!("bad damage level `{}` in `{token}`", &s[1..]))?;
            if !(1..=MAX_DAMAGE.into()).contains(&level) {
                violations.push(Violation::DamageOutOfRange { at, level });
            }
            CellSubtype::FireAffected(level.clamp(1, MAX_DAMAGE.into()) as u8)
        }
        Some(s) => return Err(format!("unknown subtype `{s}` in `{token}`")),
    };
    Ok(Cell {
        cell_type,
        subtype,
        height,
    })
}

fn apply_header(
    key: &str,
    value: &str,
    params: &mut ScenarioParams,
    width: &mut Option<usize>,
    height: &mut Option<usize>,
) -> Result<(), String> {
    let real = || -> Result<f64, String> {
        value
            .parse::<f64>()
            .map_err(|_| format!("`{value}` is not a number"))
    };
    let count = || -> Result<usize, String> {
        value
            .parse::<usize>()
            .map_err(|_| format!("`{value}` is not a non-negative integer"))
    };
    let t = &mut params.cost_table;
    match key {
        "width" => *width = Some(count()?),
        "height" => *height = Some(count()?),
        "energy_budget" => params.energy_budget = real()?,
        "resource_budget" => params.resource_budget = real()?,
        "resource_cost.normal" => t.resource_cost.normal = real()?,
        "resource_cost.forest" => t.resource_cost.forest = real()?,
        "resource_cost.water" => t.resource_cost.water = real()?,
        "nocombat_energy.normal" => t.nocombat_energy.normal = real()?,
        "nocombat_energy.forest" => t.nocombat_energy.forest = real()?,
        "nocombat_energy.water" => t.nocombat_energy.water = real()?,
        "up_slope_factor" => t.up_slope_factor = real()?,
        "down_slope_factor" => t.down_slope_factor = real()?,
        "fire_energy_scale" => t.fire_energy_scale = real()?,
        "zo_radius" => params.visibility.zo_radius = count()?,
        "zo_decay" => params.visibility.zo_decay = real()?,
        _ => return Err(format!("unknown header key `{key}`")),
    }
    Ok(())
}

/// Writes every header key explicitly so files are self-describing.
pub fn serialize_scenario(map: &ScenarioMap) -> String {
    let p = map.params();
    let t = &p.cost_table;
    let mut out = String::new();
    let header: [(&str, String); 15] = [
        ("width", map.width().to_string()),
        ("height", map.height_cells().to_string()),
        ("energy_budget", p.energy_budget.to_string()),
        ("resource_budget", p.resource_budget.to_string()),
        ("resource_cost.normal", t.resource_cost.normal.to_string()),
        ("resource_cost.forest", t.resource_cost.forest.to_string()),
        ("resource_cost.water", t.resource_cost.water.to_string()),
        (
            "nocombat_energy.normal",
            t.nocombat_energy.normal.to_string(),
        ),
        (
            "nocombat_energy.forest",
            t.nocombat_energy.forest.to_string(),
        ),
        ("nocombat_energy.water", t.nocombat_energy.water.to_string()),
        ("up_slope_factor", t.up_slope_factor.to_string()),
        ("down_slope_factor", t.down_slope_factor.to_string()),
        ("fire_energy_scale", t.fire_energy_scale.to_string()),
        ("zo_radius", p.visibility.zo_radius.to_string()),
        ("zo_decay", p.visibility.zo_decay.to_string()),
    ];
    for (k, v) in &header {
        let _ = writeln!(out, "{k} = {v}");
    }
    out.push('\n');
    for row in map.cells().chunks(map.width()) {
        let line = row.iter().map(cell_token).collect::<Vec<_>>().join(" ");
        out.push_str(&line);
        out.push('\n');
    }
    out
}

fn cell_token(cell: &Cell) -> String {
    let mut s = format!("{}{}", cell.cell_type.letter(), cell.height);
    match cell.subtype {
        CellSubtype::None => {}
        CellSubtype::UnitStart => s.push_str(":U"),
        CellSubtype::EnemyPosition => s.push_str(":E"),
        CellSubtype::TargetPoint => s.push_str(":T"),
        CellSubtype::Lethal => s.push_str(":L"),
        CellSubtype::FireAffected(d) => {
            let _ = write!(s, ":D{d}");
        }
    }
    s
}
