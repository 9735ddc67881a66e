use std::path::{Path, PathBuf};

use pursuit_core::corner_game::StrategyClass;
use pursuit_toolkit::cli::run_cli;
use pursuit_toolkit::export::{read_partition_csv, read_trajectory_jsonl};
use serde_json::Value;
use tempfile::TempDir;

fn bundled(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("scenarios").join(name)
}

/// Square obstacle with its upper-right vertex at the origin; coarse grid.
fn wedge(pursuer: [f64; 2]) -> String {
    format!(
        r#"{{
  "version": "1",
  "bounds": {{"min": [-5, -5], "max": [5, 5]}},
  "obstacles": [[[-4, -4], [0, -4], [0, 0], [-4, 0]]],
  "pursuer": {{"position": [{}, {}], "speed": 1}},
  "evader": {{"position": [-0.2, 1.5], "speed": 0.5}},
  "corner": {{"obstacle": 0, "vertex": 2}},
  "grid": {{"origin": [-5, -5], "cell_size": 0.5, "nx": 20, "ny": 20}}
}}"#,
        pursuer[0], pursuer[1]
    )
}

struct Run {
    code: i32,
    out: String,
    err: String,
}

fn pursuit(args: &[&str]) -> Run {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let argv = std::iter::once("pursuit").chain(args.iter().copied());
    let code = run_cli(argv, &mut out, &mut err);
    Run { code, out: String::from_utf8(out).unwrap(), err: String::from_utf8(err).unwrap() }
}

fn write(dir: &TempDir, name: &str, text: &str) -> String {
    let p = dir.path().join(name);
    std::fs::write(&p, text).unwrap();
    p.display().to_string()
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn unknown_subcommand_and_flag_exit_1_with_usage() {
    let r = pursuit(&["frobnicate"]);
    assert_eq!(r.code, 1);
    assert!(r.err.contains("Usage"), "{}", r.err);
    let r = pursuit(&["simulate", "--config", "x.json", "--wobble"]);
    assert_eq!(r.code, 1);
    assert!(r.err.contains("Usage"));
    let r = pursuit(&["--help"]);
    assert_eq!(r.code, 0);
    assert!(r.out.contains("solve-corner"));
}

#[test]
fn validation_errors_exit_1() {
    let dir = TempDir::new().unwrap();
    let inside = write(&dir, "in.json", &wedge([-2.0, -2.0]));
    let r = pursuit(&["validate", "--config", &inside]);
    assert_eq!(r.code, 1);
    assert!(r.err.contains("pursuer not in free space"), "{}", r.err);

    let broken = write(&dir, "bad.json", "{\n  \"version\": \"1\",\n  \"bounds\": oops\n}");
    let r = pursuit(&["validate", "--config", &broken]);
    assert_eq!(r.code, 1);
    assert!(r.err.contains("line 3"), "{}", r.err);

    let r = pursuit(&["validate", "--config", s(&dir.path().join("missing.json"))]);
    assert_eq!(r.code, 1);
}

#[test]
fn solver_errors_exit_2() {
    let dir = TempDir::new().unwrap();
    // the evader cannot see the studied corner from behind the obstacle
    let hidden = wedge([2.0, -3.0]).replace("[-0.2, 1.5]", "[-4.5, -4.5]");
    let path = write(&dir, "hidden.json", &hidden);
    let r = pursuit(&["partition", "--config", &path, "--kind", "time"]);
    assert_eq!(r.code, 2, "{}", r.err);
    assert!(r.err.contains("solver error"));
}

#[test]
fn validate_echoes_defaults() {
    let dir = TempDir::new().unwrap();
    let path = write(&dir, "w.json", &wedge([2.0, -3.0]));
    let r = pursuit(&["validate", "--config", &path]);
    assert_eq!(r.code, 0, "{}", r.err);
    let v: Value = serde_json::from_str(&r.out).unwrap();
    assert_eq!(v["dt"], serde_json::json!(1.0 / 120.0));
    assert_eq!(v["max_time"], serde_json::json!(60.0));
    assert_eq!(v["pursuer_policy"]["kind"], "pursuit_field");
}

#[test]
fn solve_corner_reports_class1_with_residuals() {
    let dir = TempDir::new().unwrap();
    let path = write(&dir, "c1.json", &wedge([3.525, -4.475]));
    let r = pursuit(&["solve-corner", "--config", &path]);
    assert_eq!(r.code, 0, "{}", r.err);
    assert!(r.out.contains(r#""class":"Class1""#), "{}", r.out);
    let v: Value = serde_json::from_str(&r.out).unwrap();
    let t_f = v["t_f"].as_f64().unwrap();
    assert_eq!(v["tracking_time"].as_f64(), Some(t_f));
    // the run ends on the tangent line, which then outruns the pursuer
    assert!(v["residuals"]["collinearity"].as_f64().unwrap().abs() < 1e-9, "{}", v["residuals"]);
    assert!(v["residuals"]["rate_gap"].as_f64().unwrap() > 0.0);
    let d = &v["direction"];
    let norm = d[0].as_f64().unwrap().hypot(d[1].as_f64().unwrap());
    assert!((norm - 1.0).abs() < 1e-12);
}

#[test]
fn solve_corner_reports_infinite_time_as_literal() {
    let r = pursuit(&["solve-corner", "--config", s(&bundled("wedge.json"))]);
    assert_eq!(r.code, 0, "{}", r.err);
    let v: Value = serde_json::from_str(&r.out).unwrap();
    assert_eq!(v["class"], "ShortestPathToStar");
    assert_eq!(v["tracking_time"], "inf");
}

#[test]
fn strategy_partition_holds_codes_1_to_6() {
    let dir = TempDir::new().unwrap();
    let cfg = write(&dir, "w.json", &wedge([2.0, -3.0]));
    let out = dir.path().join("p.csv");
    let r = pursuit(&["partition", "--config", &cfg, "--kind", "strategy", "--out", s(&out)]);
    assert_eq!(r.code, 0, "{}", r.err);
    let text = std::fs::read_to_string(&out).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("# kind,nx,ny,ox,oy,cell"));
    assert_eq!(lines.next(), Some("# strategy,20,20,-5,-5,0.5"));
    let codes: Vec<u8> = lines.map(|l| l.parse().unwrap()).collect();
    assert_eq!(codes.len(), 400);
    assert!(codes.iter().all(|c| (1..=6).contains(c)));
    assert!(codes.contains(&6) && codes.contains(&1));

    let p = read_partition_csv(text.as_bytes()).unwrap();
    assert_eq!(p.class_at(0, 0), StrategyClass::from_code(codes[0]));
    assert_eq!(p.class_at(4, 4), Some(StrategyClass::Obstacle));

    // pursuer-fixed sweeps go to stdout without --out
    let r = pursuit(&["partition", "--config", &cfg, "--player", "pursuer", "--kind", "time"]);
    assert_eq!(r.code, 0, "{}", r.err);
    assert!(r.out.starts_with("# kind,nx,ny,ox,oy,cell\n# time,20,20,"));
}

#[test]
fn partition_exports_are_byte_stable() {
    let dir = TempDir::new().unwrap();
    let cfg = write(&dir, "w.json", &wedge([2.0, -3.0]));
    for format in ["csv", "svg"] {
        let a = dir.path().join(format!("a.{format}"));
        let b = dir.path().join(format!("b.{format}"));
        for out in [&a, &b] {
            let r = pursuit(&["partition", "--config", &cfg, "--kind", "time", "--format", format, "--out", s(out)]);
            assert_eq!(r.code, 0, "{}", r.err);
        }
        assert_eq!(std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());
    }
    let svg = std::fs::read_to_string(dir.path().join("a.svg")).unwrap();
    assert!(svg.starts_with("<?xml") || svg.starts_with("<svg"));
    assert!(svg.contains("#808080") && svg.contains("#d62728"));
}

#[test]
fn unwritable_output_is_an_io_error() {
    let dir = TempDir::new().unwrap();
    let cfg = write(&dir, "w.json", &wedge([2.0, -3.0]));
    let out = dir.path().join("no/such/dir/p.csv");
    let r = pursuit(&["partition", "--config", &cfg, "--out", s(&out)]);
    assert_eq!(r.code, 1);
    assert!(r.err.contains("cannot write"), "{}", r.err);
}

#[test]
fn corner_field_and_pursuit_samples() {
    let dir = TempDir::new().unwrap();
    let cfg = write(&dir, "w.json", &wedge([2.0, -3.0]));
    let r = pursuit(&["field", "--config", &cfg]);
    assert_eq!(r.code, 0, "{}", r.err);
    let mut lines = r.out.lines();
    assert_eq!(lines.next(), Some("# x,y,vx,vy,t"));
    assert_eq!(lines.count(), 400);

    let args = ["field", "--config", &cfg, "--samples", "25", "--policy", "distance", "--seed", "7"];
    let a = pursuit(&args);
    let b = pursuit(&args);
    assert_eq!(a.code, 0, "{}", a.err);
    assert_eq!(a.out, b.out);
    let rows: Vec<Vec<f64>> =
        a.out.lines().skip(1).map(|l| l.split(',').map(|x| x.parse().unwrap()).collect()).collect();
    assert_eq!(rows.len(), 25);
    for r in &rows {
        assert!((r[2].hypot(r[3]) - 1.0).abs() < 1e-9);
    }
    let c = pursuit(&["field", "--config", &cfg, "--samples", "25", "--policy", "distance", "--seed", "8"]);
    assert_ne!(a.out, c.out);
}

#[test]
fn simulate_is_deterministic_and_reimports() {
    let cfg = bundled("two_obstacle.json");
    let args = ["simulate", "--config", s(&cfg), "--policy", "inverse-time"];
    let a = pursuit(&args);
    let b = pursuit(&args);
    assert_eq!(a.code, 0, "{}", a.err);
    assert_eq!(a.out, b.out);

    let steps = read_trajectory_jsonl(a.out.as_bytes()).unwrap();
    assert!(steps.iter().all(|s| s.los));
    assert_eq!(steps.len(), a.out.lines().count());
    let first: Value = serde_json::from_str(a.out.lines().next().unwrap()).unwrap();
    for key in ["t", "px", "py", "ex", "ey", "los", "corner", "weights"] {
        assert!(first.get(key).is_some(), "missing {key}");
    }

    let short = pursuit(&["simulate", "--config", s(&cfg), "--dt", "0.05", "--max-time", "1"]);
    assert_eq!(short.code, 0, "{}", short.err);
    assert_eq!(short.out.lines().count(), 21);

    let dir = TempDir::new().unwrap();
    let svg = dir.path().join("t.svg");
    let r = pursuit(&["simulate", "--config", s(&cfg), "--max-time", "2", "--format", "svg", "--out", s(&svg)]);
    assert_eq!(r.code, 0, "{}", r.err);
    assert!(std::fs::read_to_string(&svg).unwrap().contains("#1f4fd6"));
}
