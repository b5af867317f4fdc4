use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;
use tempfile::TempDir;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_toroidal"))
}

fn write_model(dir: &TempDir, name: &str, vars: &[&str], boundary: &[&str], gens: &[&str]) -> PathBuf {
    let doc = serde_json::json!({ "variables": vars, "boundary": boundary, "generators": gens });
    let path = dir.path().join(name);
    std::fs::write(&path, doc.to_string()).unwrap();
    path
}

fn xyu(dir: &TempDir, gens: &[&str]) -> PathBuf {
    write_model(dir, "model.json", &["x", "y", "u"], &["x", "y"], gens)
}

fn run(args: &[&str], file: Option<&Path>) -> Output {
    let mut cmd = bin();
    cmd.args(args);
    if let Some(f) = file {
        cmd.arg(f);
    }
    cmd.output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn read_json(path: &Path) -> Value {
    serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap()
}

#[test]
fn hull_prints_minimal_generators() {
    let dir = TempDir::new().unwrap();
    let f = xyu(&dir, &["x^2 + x*y*u", "y^3*u - x*y"]);
    let out = run(&["hull"], Some(&f));
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert!(text.contains("chart {x, y}: x^2, x*y, y^3"), "{text}");
    assert!(text.contains("  {x}: 1"), "{text}");
    assert!(text.contains("  {x, y}: x^2, x*y, y^3"), "{text}");
}

#[test]
fn hull_of_unit_and_zero_ideals() {
    let dir = TempDir::new().unwrap();
    let out = run(&["hull"], Some(&xyu(&dir, &["x^2 + u"])));
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).contains("unit ideal (toroidally resolved)"));
    let out = run(&["hull"], Some(&xyu(&dir, &["x - x"])));
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("zero"));
}

#[test]
fn resolve_monomial_example() {
    let dir = TempDir::new().unwrap();
    let f = write_model(&dir, "m.json", &["x", "y"], &["x", "y"], &["x^2", "y^3"]);
    let trace = dir.path().join("t.json");
    let out = run(&["resolve", "--trace", trace.to_str().unwrap()], Some(&f));
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert!(text.contains("status: resolved"));
    assert!(text.contains("steps: 3"));
    assert!(text.contains("1. center {x, y} m=2 -> E1"), "{text}");
    let doc = read_json(&trace);
    assert_eq!(doc["status"], "resolved");
    let mults: Vec<u64> = doc["steps"].as_array().unwrap().iter().map(|s| s["multiplicity"].as_u64().unwrap()).collect();
    assert_eq!(mults, vec![2, 1, 1]);
    assert!(doc["final_charts"].as_array().unwrap().iter().all(|c| c["unit"] == true));
}

#[test]
fn resolve_cross_term() {
    let dir = TempDir::new().unwrap();
    let out = run(&["resolve"], Some(&xyu(&dir, &["x*y"])));
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert!(text.contains("steps: 3"));
    assert!(text.contains("2. center {x} m=1 -> x"), "{text}");
    assert!(text.contains("3. center {y} m=1 -> y"), "{text}");
}

#[test]
fn step_cap_writes_partial_trace() {
    let dir = TempDir::new().unwrap();
    let f = write_model(&dir, "m.json", &["x", "y"], &["x", "y"], &["x^2", "y^3"]);
    let trace = dir.path().join("partial.json");
    let out = run(&["resolve", "--max-steps", "1", "--trace", trace.to_str().unwrap()], Some(&f));
    assert_eq!(out.status.code(), Some(3));
    let doc = read_json(&trace);
    assert_eq!(doc["status"], "step-cap-exceeded");
    assert_eq!(doc["steps"].as_array().unwrap().len(), 1);
}

#[test]
fn traces_are_byte_reproducible_and_replay() {
    let dir = TempDir::new().unwrap();
    let f = xyu(&dir, &["x^2 + x*y*u", "y^3*u - x*y"]);
    let a = dir.path().join("a.json");
    let b = dir.path().join("b.json");
    for t in [&a, &b] {
        let out = run(&["resolve", "--verify", "--seed", "42", "--trace", t.to_str().unwrap()], Some(&f));
        assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    }
    let (ba, bb) = (std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());
    assert_eq!(ba, bb);
    let doc = read_json(&a);
    assert_eq!(doc["verification"]["seed"], 42);
    assert!(doc["verification"]["entries"].as_array().unwrap().iter().all(|e| e["passed"] == true));

    let out = run(&["resolve", "--replay"], Some(&a));
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).starts_with("replay ok"));

    let mut tampered = doc.clone();
    tampered["final_charts"][0]["generators"][0] = Value::from("x");
    let t = dir.path().join("tampered.json");
    std::fs::write(&t, serde_json::to_string_pretty(&tampered).unwrap()).unwrap();
    assert_eq!(run(&["resolve", "--replay"], Some(&t)).status.code(), Some(2));
}

#[test]
fn field_override_is_recorded() {
    let dir = TempDir::new().unwrap();
    let f = xyu(&dir, &["x^2 + 2*y^3"]);
    let t = dir.path().join("t.json");
    let out = run(&["resolve", "--field", "fp:2", "--trace", t.to_str().unwrap()], Some(&f));
    assert_eq!(out.status.code(), Some(0));
    let doc = read_json(&t);
    assert_eq!(doc["model"]["field"], "fp:2");
    // Over F_2 the second term vanishes; x^2 needs a single ray blow-up.
    assert_eq!(doc["steps"].as_array().unwrap().len(), 1);
}

#[test]
fn error_exit_codes() {
    let dir = TempDir::new().unwrap();
    let bad_json = dir.path().join("bad.json");
    std::fs::write(&bad_json, "{ not json").unwrap();
    assert_eq!(run(&["hull"], Some(&bad_json)).status.code(), Some(1));
    assert_eq!(run(&["hull"], Some(&xyu(&dir, &["x^^2"]))).status.code(), Some(1));
    assert_eq!(run(&["hull"], Some(&xyu(&dir, &["w + x"]))).status.code(), Some(1));
    let f = write_model(&dir, "b.json", &["x", "y"], &["x", "q"], &["x"]);
    assert_eq!(run(&["hull"], Some(&f)).status.code(), Some(2));
    let f = xyu(&dir, &["x"]);
    assert_eq!(run(&["resolve", "--field", "fp:4"], Some(&f)).status.code(), Some(1));
    assert_eq!(run(&["resolve", "--strategy", "deepest"], Some(&f)).status.code(), Some(1));
    assert_eq!(run(&["resolve", "--bogus"], Some(&f)).status.code(), Some(1));
    assert_eq!(run(&["hull"], Some(&dir.path().join("missing.json"))).status.code(), Some(1));
    assert_eq!(run(&["--help"], None).status.code(), Some(0));
}
