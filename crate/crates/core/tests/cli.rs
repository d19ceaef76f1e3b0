use std::process::Command;

use chac::cli::{
    render_path, run_experiment, ExperimentSpec, RenderFormat, RuleKind, ScenarioSource,
};
use chac::scenario::{parse_scenario, Generator};

fn chac(args: &[&str]) -> std::process::Output {
    Command::new(env!("CARGO_BIN_EXE_chac"))
        .args(args)
        .output()
        .unwrap()
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let good = dir.path().join("good.map");
    let bad = dir.path().join("bad.map");
    let walled = dir.path().join("walled.map");
    std::fs::write(&good, "N0:U N0 N0:T\n").unwrap();
    std::fs::write(&bad, "N0:U N0\n").unwrap();
    std::fs::write(&walled, "N0:U O0 N0:T\n").unwrap();
    let p = |f: &std::path::Path| f.to_str().unwrap().to_owned();

    assert_eq!(chac(&["validate", &p(&good)]).status.code(), Some(0));
    assert_eq!(chac(&["validate", &p(&bad)]).status.code(), Some(2));
    assert_eq!(
        chac(&["solve", &p(&good), "--iterations", "5", "--ants", "2"])
            .status
            .code(),
        Some(0)
    );
    assert_eq!(
        chac(&["solve", &p(&walled), "--iterations", "5", "--ants", "2"])
            .status
            .code(),
        Some(3)
    );
    assert_eq!(
        chac(&["solve", &p(&walled), "--rule", "greedy"])
            .status
            .code(),
        Some(3)
    );
    assert_eq!(
        chac(&["solve", &p(&good), "--rule", "bogus"]).status.code(),
        Some(1)
    );
    assert_eq!(chac(&["frobnicate"]).status.code(), Some(1));
    assert_eq!(
        chac(&["solve", &p(&good), "--zo-decay", "0"]).status.code(),
        Some(1)
    );
    assert_eq!(
        chac(&["solve", &p(&good), "--zo-radius", "2", "--iterations", "5"])
            .status
            .code(),
        Some(0)
    );
    assert_eq!(chac(&["--help"]).status.code(), Some(0));
}

#[test]
fn generate_then_validate() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("w.map");
    let o = out.to_str().unwrap();
    assert_eq!(
        chac(&["generate", "walls", "--seed", "3", "-o", o])
            .status
            .code(),
        Some(0)
    );
    let text = std::fs::read_to_string(&out).unwrap();
    assert_eq!(parse_scenario(&text).unwrap(), Generator::Walls.generate(3));
    let v = chac(&["validate", o]);
    assert_eq!(String::from_utf8_lossy(&v.stdout), "OK\n");
}

#[test]
fn solve_renders_svg_to_file() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("p.svg");
    let run = chac(&[
        "solve",
        "river:1",
        "--iterations",
        "20",
        "--ants",
        "5",
        "--render",
        "svg",
        "--render-out",
        out.to_str().unwrap(),
    ]);
    assert_eq!(run.status.code(), Some(0));
    let svg = std::fs::read_to_string(&out).unwrap();
    assert!(svg.starts_with("<svg") && svg.ends_with("</svg>\n"));
}

#[test]
fn svg_introspection() {
    let map = Generator::RiverForest.generate(2);
    let cfg = chac::SolverConfig {
        num_iterations: 30,
        num_ants: 8,
        ..Default::default()
    };
    let run = chac::solve(&map, &cfg).unwrap();
    let best = run.archive.best_speed().unwrap();
    let svg = render_path(&map, &best.nodes, RenderFormat::Svg).unwrap();
    assert_eq!(svg.matches(r#"class="cell""#).count(), map.numc());
    for &n in &best.nodes {
        assert_eq!(svg.matches(&format!(r#"data-node="{n}""#)).count(), 1);
    }
    assert_eq!(svg.matches(r#"class="path""#).count(), best.nodes.len());
    let ascii = render_path(&map, &best.nodes, RenderFormat::Ascii).unwrap();
    let grid: String = ascii.lines().take(map.height_cells()).collect();
    assert_eq!(grid.matches('*').count(), best.nodes.len());
}

#[test]
fn experiment_csv_is_reproducible() {
    let mut spec = ExperimentSpec::new(ScenarioSource::parse("river:4"));
    spec.rules = vec![RuleKind::Cstr, RuleKind::Dstr, RuleKind::Greedy];
    spec.repetitions = 3;
    spec.iterations = 20;
    spec.ants = 5;
    let a = run_experiment(&spec).unwrap();
    let b = run_experiment(&spec).unwrap();
    assert_eq!(a.to_csv(), b.to_csv());
    assert_eq!(a.table(), b.table());
    let header = a.to_csv().lines().next().unwrap().to_owned();
    assert_eq!(header, "rule,lambda,rep,seed,ff,fs,archive_size,path_len");
}
