use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_dissipative-fall"))
}

fn run(dir: &Path, args: &[&str]) -> Output {
    bin().arg("--out-dir").arg(dir).args(args).output().unwrap()
}

fn schema(name: &str) -> Value {
    let path = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../docs/schemas").join(name);
    serde_json::from_str(&fs::read_to_string(path).unwrap()).unwrap()
}

/// Subset of JSON Schema used by the shipped schemas.
fn validate(v: &Value, s: &Value, at: &str) {
    if let Some(t) = s.get("type") {
        let types: Vec<&str> = match t {
            Value::String(one) => vec![one.as_str()],
            Value::Array(many) => many.iter().map(|x| x.as_str().unwrap()).collect(),
            _ => panic!("bad schema type"),
        };
        let ok = types.iter().any(|t| match *t {
            "object" => v.is_object(),
            "array" => v.is_array(),
            "number" => v.is_number(),
            "integer" => v.is_i64() || v.is_u64(),
            "boolean" => v.is_boolean(),
            "string" => v.is_string(),
            "null" => v.is_null(),
            _ => false,
        });
        assert!(ok, "{at}: {v} is not {types:?}");
    }
    if let Some(c) = s.get("const") {
        assert_eq!(v, c, "{at}");
    }
    if let Some(Value::Array(e)) = s.get("enum") {
        assert!(e.contains(v), "{at}: {v} not in {e:?}");
    }
    if let Some(min) = s.get("minimum").and_then(Value::as_f64) {
        assert!(v.as_f64().unwrap() >= min, "{at}");
    }
    if let Some(Value::Array(req)) = s.get("required") {
        for k in req {
            assert!(v.get(k.as_str().unwrap()).is_some(), "{at}: missing {k}");
        }
    }
    if let (Some(Value::Object(props)), Some(obj)) = (s.get("properties"), v.as_object()) {
        for (k, sub) in props {
            if let Some(x) = obj.get(k) {
                validate(x, sub, &format!("{at}.{k}"));
            }
        }
    }
    if let (Some(items), Some(arr)) = (s.get("items"), v.as_array()) {
        for (i, x) in arr.iter().enumerate() {
            validate(x, items, &format!("{at}[{i}]"));
        }
    }
}

fn read_json(path: PathBuf) -> Value {
    serde_json::from_str(&fs::read_to_string(path).unwrap()).unwrap()
}

fn csv_column(text: &str, name: &str) -> Vec<f64> {
    let mut lines = text.lines();
    let header: Vec<&str> = lines.next().unwrap().split(',').collect();
    let i = header.iter().position(|h| *h == name).unwrap();
    lines.map(|l| l.split(',').nth(i).unwrap().parse().unwrap()).collect()
}

#[test]
fn simulate_reports_small_drift() {
    let dir = tempfile::tempdir().unwrap();
    let out = run(
        dir.path(),
        &["simulate", "--m", "1", "--g", "1", "--alpha", "0.25", "--x0", "10", "--v0", "0", "--t-end", "2"],
    );
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let csv = fs::read_to_string(dir.path().join("trajectory.csv")).unwrap();
    assert!(csv.starts_with("t,x,v,k1,k2\n"));
    let k2 = csv_column(&csv, "k2");
    assert!(k2.iter().all(|k| (k - k2[0]).abs() < 1e-8 * k2[0].abs()));
    assert!(fs::read_to_string(dir.path().join("trajectory.svg")).unwrap().contains("<svg"));
}

#[test]
fn output_is_byte_identical_across_runs() {
    let (a, b) = (tempfile::tempdir().unwrap(), tempfile::tempdir().unwrap());
    for d in [&a, &b] {
        assert!(run(d.path(), &["simulate", "--alpha", "0.3", "--v0=-0.5"]).status.success());
        assert!(run(d.path(), &["spectrum", "--n-max", "5"]).status.success());
    }
    for f in ["trajectory.csv", "trajectory.svg", "spectrum.csv", "spectrum.svg"] {
        assert_eq!(fs::read(a.path().join(f)).unwrap(), fs::read(b.path().join(f)).unwrap(), "{f}");
    }
}

#[test]
fn frictionless_simulation_is_a_parabola() {
    let dir = tempfile::tempdir().unwrap();
    assert!(run(dir.path(), &["simulate", "--alpha", "0", "--x0", "5", "--v0", "2"]).status.success());
    let csv = fs::read_to_string(dir.path().join("trajectory.csv")).unwrap();
    for (t, x) in csv_column(&csv, "t").into_iter().zip(csv_column(&csv, "x")) {
        assert!((x - (5.0 + 2.0 * t - 0.5 * t * t)).abs() < 1e-9);
    }
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let beyond = run(dir.path(), &["simulate", "--v0", "-3", "--log-diagnostics"]);
    assert_eq!(beyond.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&beyond.stderr).contains("terminal speed"));
    assert_eq!(run(dir.path(), &["simulate", "--no-such-flag"]).status.code(), Some(2));
    assert_eq!(run(dir.path(), &["simulate", "--format", "xml"]).status.code(), Some(2));
    assert_eq!(run(dir.path(), &["spectrum", "--n-max", "101"]).status.code(), Some(1));
    let cfg = dir.path().join("bad.cfg");
    fs::write(&cfg, "alhpa = 0.1\n").unwrap();
    assert_eq!(run(dir.path(), &["--config", cfg.to_str().unwrap(), "simulate"]).status.code(), Some(2));
}

#[test]
fn flags_override_config_file() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.cfg");
    fs::write(&cfg, "# spectrum settings\nalpha = 0.02\nn_max = 4\nformat = json\n").unwrap();
    let c = cfg.to_str().unwrap();
    assert!(run(dir.path(), &["--config", c, "spectrum", "--n-max", "3"]).status.success());
    let doc = read_json(dir.path().join("spectrum.json"));
    assert_eq!(doc["config"]["params"]["alpha"], 0.02);
    assert_eq!(doc["rows"].as_array().unwrap().len(), 3);
    validate(&doc, &schema("spectrum.schema.json"), "spectrum");
}

#[test]
fn spectrum_defaults_and_zero_drag() {
    let dir = tempfile::tempdir().unwrap();
    assert!(run(dir.path(), &["spectrum"]).status.success());
    let csv = fs::read_to_string(dir.path().join("spectrum.csv")).unwrap();
    assert_eq!(csv.lines().count(), 11);
    let (lo, ex, sp) = (csv_column(&csv, "de_log"), csv_column(&csv, "de_exp"), csv_column(&csv, "splitting"));
    for i in 0..10 {
        assert_eq!(sp[i], ex[i] - lo[i]);
    }
    assert!(csv_column(&csv, "dev_log").iter().chain(&csv_column(&csv, "dev_exp")).all(|d| *d < 1e-6));

    assert!(run(dir.path(), &["spectrum", "--alpha", "0"]).status.success());
    let csv = fs::read_to_string(dir.path().join("spectrum.csv")).unwrap();
    assert!(csv_column(&csv, "de_log").iter().chain(&csv_column(&csv, "de_exp")).all(|d| *d == 0.0));
}

#[test]
fn json_outputs_match_schemas() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    assert!(run(d, &["--format", "json", "simulate"]).status.success());
    validate(&read_json(d.join("trajectory.json")), &schema("trajectory.schema.json"), "trajectory");
    assert!(run(d, &["--format", "json", "thermo"]).status.success());
    validate(&read_json(d.join("thermo.json")), &schema("thermo.schema.json"), "thermo");
    assert!(run(d, &["--format", "json", "sweep", "--points", "8", "--beta-max", "100"]).status.success());
    validate(&read_json(d.join("sweep.json")), &schema("sweep.schema.json"), "sweep");
    // verify exits 1 while any check fails; the report is written either way
    let out = run(d, &["verify"]);
    let report = read_json(d.join("verify_report.json"));
    validate(&report, &schema("verify_report.schema.json"), "verify");
    assert_eq!(out.status.code(), Some(if report["passed"] == true { 0 } else { 1 }));
    assert!(!report["adjudications"].as_array().unwrap().is_empty());
}

#[test]
fn sweep_at_tiny_alpha_and_crossover_report() {
    let dir = tempfile::tempdir().unwrap();
    assert!(run(dir.path(), &["sweep", "--alpha", "1e-8", "--points", "10", "--no-quadrature"]).status.success());
    let csv = fs::read_to_string(dir.path().join("sweep.csv")).unwrap();
    assert!(csv_column(&csv, "abs_delta_cv").iter().all(|d| *d < 1e-6));

    let out = run(dir.path(), &["sweep", "--points", "16", "--beta-max", "100"]);
    assert!(out.status.success());
    let stdout = String::from_utf8_lossy(&out.stdout);
    assert!(stdout.contains("crossover at beta*"), "{stdout}");
    let cross = fs::read_to_string(dir.path().join("crossovers.csv")).unwrap();
    assert_eq!(cross.lines().count(), 2);
    assert!(fs::read_to_string(dir.path().join("sweep.svg")).unwrap().contains("<polyline"));
}
