use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;
use tempfile::TempDir;

const TRIANGLE_HOLE: &str = "epsilon 1.1\npoint 0 0\npoint 2 0\npoint 1 1.7320508075688772\n";

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_eps-hull"))
}

fn scene(dir: &TempDir, name: &str, text: &str) -> PathBuf {
    let p = dir.path().join(name);
    std::fs::write(&p, text).unwrap();
    p
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().unwrap()
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn json(p: &Path) -> Value {
    serde_json::from_str(&std::fs::read_to_string(p).unwrap()).unwrap()
}

#[test]
fn decompose_single_point_writes_one_curve() {
    let dir = TempDir::new().unwrap();
    let sc = scene(&dir, "point.txt", "epsilon 1\npoint 0 0\n");
    let out = dir.path().join("out.json");
    let o = run(&["decompose", s(&sc), "--json", s(&out)]);
    assert_eq!(o.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["curves"].as_array().unwrap().len(), 1);
    let singular = v["vertices"].as_array().unwrap().iter().filter(|w| w["class"] != "smooth").count();
    assert_eq!(singular, 0);
    assert_eq!(v["scene"]["components"], 1);
}

#[test]
fn check_triangle_hole_reports_counts() {
    let dir = TempDir::new().unwrap();
    let sc = scene(&dir, "tri.txt", TRIANGLE_HOLE);
    let out = dir.path().join("check.json");
    let o = run(&["check", s(&sc), "--grid", "512", "--json", s(&out)]);
    let stdout = String::from_utf8(o.stdout).unwrap();
    assert_eq!(o.status.code(), Some(0), "{stdout}");
    assert!(stdout.starts_with("components: 2, curves: 2, wedges: 6\n"));
    let v = json(&out);
    assert_eq!(v["oracle"]["components"], 2);
    assert_eq!(v["oracle"]["grid"], 512);
    assert!(v["checks"].as_array().unwrap().iter().all(|c| c["ok"] == true));
}

#[test]
fn render_emits_one_arc_path_per_curve() {
    let dir = TempDir::new().unwrap();
    let sc = scene(&dir, "tri.txt", TRIANGLE_HOLE);
    let out = dir.path().join("fig.svg");
    let o = run(&["render", s(&sc), "--svg", s(&out)]);
    assert_eq!(o.status.code(), Some(0));
    let svg = std::fs::read_to_string(&out).unwrap();
    assert!(svg.contains("<svg") && svg.contains("version=\"1.1\""));
    assert_eq!(svg.matches("<path").count(), 2);
    assert_eq!(svg.matches(" A ").count(), 6);
    assert_eq!(svg.matches(r#"class="S1""#).count(), 6);
}

#[test]
fn classify_marks_tangency_as_s3_q1() {
    let dir = TempDir::new().unwrap();
    let sc = scene(&dir, "tangent.txt", "epsilon 1\npoint -1 0\npoint 1 0\n");
    let out = dir.path().join("c.json");
    let o = run(&["classify", s(&sc), "--json", s(&out)]);
    assert_eq!(o.status.code(), Some(0));
    let v = json(&out);
    let verts = v["vertices"].as_array().unwrap();
    assert_eq!(verts.len(), 1);
    assert_eq!(verts[0]["class"], "S3");
    assert_eq!(verts[0]["q_split"], "Q1");
    assert_eq!(verts[0]["x"], 0.0);
}

#[test]
fn curvature_on_stadium_passes() {
    let dir = TempDir::new().unwrap();
    let sc = scene(&dir, "stadium.txt", "epsilon 2\nsegment 0 0 2 0\n");
    let out = dir.path().join("k.json");
    let o = run(&["curvature", s(&sc), "--json", s(&out)]);
    assert_eq!(o.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["curvature"]["bv_ok"], true);
    let kappas: Vec<f64> = v["curvature"]["per_element"].as_array().unwrap().iter().map(|k| k["kappa"].as_f64().unwrap()).collect();
    assert_eq!(kappas.len(), 4);
    assert_eq!(kappas.iter().filter(|&&k| k == 0.0).count(), 2);
    assert_eq!(kappas.iter().filter(|&&k| k == -0.5).count(), 2);
}

#[test]
fn json_is_byte_identical_across_runs() {
    let dir = TempDir::new().unwrap();
    let sc = scene(&dir, "mix.txt", "epsilon 0.7\npoint 0 0\nsegment 1 0 2 1\npoint 0.5 1.2\nsegment -1 -1 -0.2 -1.4\n");
    for cmd in ["decompose", "check"] {
        let a = dir.path().join(format!("{cmd}-a.json"));
        let b = dir.path().join(format!("{cmd}-b.json"));
        run(&[cmd, s(&sc), "--json", s(&a)]);
        run(&[cmd, s(&sc), "--json", s(&b)]);
        assert_eq!(std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap(), "{cmd}");
    }
}

#[test]
fn exit_codes() {
    let dir = TempDir::new().unwrap();
    let good = scene(&dir, "ok.txt", "epsilon 1\npoint 0 0\n");
    let bad = scene(&dir, "bad.txt", "epsilon 1\npoint 0\n");
    let no_eps = scene(&dir, "noeps.txt", "point 0 0\n");
    assert_eq!(run(&["frobnicate", s(&good)]).status.code(), Some(64));
    assert_eq!(run(&["build", s(&good), "--bogus"]).status.code(), Some(64));
    assert_eq!(run(&["build"]).status.code(), Some(64));
    assert_eq!(run(&["--help"]).status.code(), Some(0));
    assert_eq!(run(&["build", s(&bad)]).status.code(), Some(1));
    assert_eq!(run(&["build", s(&no_eps)]).status.code(), Some(1));
    assert_eq!(run(&["build", "/definitely/not/here.txt"]).status.code(), Some(1));
    assert_eq!(run(&["build", s(&good), "--tolerance=-1"]).status.code(), Some(1));
    assert_eq!(run(&["build", s(&good), "--tolerance", "0"]).status.code(), Some(1));
    assert_eq!(run(&["build", s(&good)]).status.code(), Some(0));
}

#[test]
fn build_lists_stadium_elements() {
    let dir = TempDir::new().unwrap();
    let sc = scene(&dir, "stadium.txt", "epsilon 1\nsegment 0 0 1 0\n");
    let out = dir.path().join("b.json");
    let o = run(&["build", s(&sc), "--json", s(&out), "--tolerance", "1e-10"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(String::from_utf8(o.stdout).unwrap(), "elements: 4, vertices: 4\n");
    let v = json(&out);
    assert_eq!(v["scene"]["tolerance"], 1e-10);
    let kinds: Vec<&str> = v["elements"].as_array().unwrap().iter().map(|e| e["kind"].as_str().unwrap()).collect();
    assert_eq!(kinds.iter().filter(|k| **k == "arc").count(), 2);
    assert_eq!(kinds.iter().filter(|k| **k == "offset_segment").count(), 2);
}
