use std::path::Path;
use std::process::{Command, Output};

use tempfile::TempDir;

const SMALL: &[&str] = &["--n-angles", "16", "--n-eta", "120", "--length", "25"];

fn kinlayer(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_kinlayer"))
        .args(args)
        .current_dir(dir)
        .env_remove("KINLAYER_OUT_DIR")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn value(text: &str, key: &str) -> f64 {
    let line = text.lines().find(|l| l.starts_with(&format!("{key}:"))).unwrap_or_else(|| panic!("no `{key}` in\n{text}"));
    line.split_once(':').unwrap().1.trim().parse().unwrap()
}

fn with(extra: &[&'static str]) -> Vec<&'static str> {
    let mut v = extra.to_vec();
    v.extend_from_slice(SMALL);
    v
}

#[test]
fn milne_reports_far_field_inside_data_range() {
    let dir = TempDir::new().unwrap();
    let o = kinlayer(dir.path(), &with(&["milne", "--g", "cos:1:2", "--eps", "0.1"]));
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let text = stdout(&o);
    let f = value(&text, "f_infinity");
    assert!((1.0..=3.0).contains(&f), "f_infinity {f}");
    assert!(value(&text, "max_principle_margin") >= -1e-8);
    assert!(dir.path().join("milne.json").is_file());
    assert!(dir.path().join("milne_diagnostics.csv").is_file());
}

#[test]
fn constant_inflow_is_reproduced() {
    let dir = TempDir::new().unwrap();
    let o = kinlayer(dir.path(), &with(&["milne", "--g", "const:7"]));
    assert!(o.status.success());
    assert!((value(&stdout(&o), "f_infinity") - 7.0).abs() < 1e-10);
}

#[test]
fn incompatible_diffusive_data_exit_4() {
    let dir = TempDir::new().unwrap();
    let o = kinlayer(dir.path(), &with(&["milne", "--bc", "diffusive", "--g", "const:1"]));
    assert_eq!(o.status.code(), Some(4));
    assert!(String::from_utf8_lossy(&o.stderr).starts_with("error:"));
}

#[test]
fn starved_iteration_exit_3() {
    let dir = TempDir::new().unwrap();
    let o = kinlayer(dir.path(), &with(&["milne", "--solver", "damped", "--max-iterations", "2"]));
    assert_eq!(o.status.code(), Some(3));
}

#[test]
fn configuration_errors_exit_2() {
    let dir = TempDir::new().unwrap();
    let bad = dir.path().join("bad.json");
    std::fs::write(&bad, r#"{"g": "cos:1", "unknown_key": 3}"#).unwrap();
    for args in [
        vec!["milne", "--config", bad.to_str().unwrap()],
        vec!["milne", "--g", "sin:2"],
        vec!["milne", "--eps", "-0.1"],
        vec!["milne", "--eps", "0.1,0.2"],
        vec!["milne", "--config", "missing.json"],
        vec!["probe", "grazing", "--levels", "9"],
    ] {
        let o = kinlayer(dir.path(), &args);
        assert_eq!(o.status.code(), Some(2), "{args:?}: {}", String::from_utf8_lossy(&o.stderr));
    }
}

#[test]
fn flags_override_config_file() {
    let dir = TempDir::new().unwrap();
    let cfg = dir.path().join("run.json");
    std::fs::write(&cfg, r#"{"command": "milne", "g": "const:3", "eps": 0.2, "n_angles": 16, "n_eta": 120, "length": 25, "out": "from_file"}"#)
        .unwrap();
    let o = kinlayer(dir.path(), &["milne", "--config", "run.json"]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    assert!((value(&stdout(&o), "f_infinity") - 3.0).abs() < 1e-10);
    assert!(dir.path().join("from_file/milne.json").is_file());

    let o = kinlayer(dir.path(), &["milne", "--config", "run.json", "--g", "const:5", "--out", "from_flag"]);
    assert!(o.status.success());
    assert!((value(&stdout(&o), "f_infinity") - 5.0).abs() < 1e-10);
    let doc = std::fs::read_to_string(dir.path().join("from_flag/milne.json")).unwrap();
    assert!(doc.contains("\"g\": \"const:5\""));
    assert!(doc.contains("\"epsilon\": 0.2"));

    let o = kinlayer(dir.path(), &["disk", "--config", "run.json"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn out_dir_environment_variable() {
    let dir = TempDir::new().unwrap();
    let o = Command::new(env!("CARGO_BIN_EXE_kinlayer"))
        .args(with(&["milne", "--g", "const:1"]))
        .current_dir(dir.path())
        .env("KINLAYER_OUT_DIR", "env_out")
        .output()
        .unwrap();
    assert!(o.status.success());
    assert!(dir.path().join("env_out/milne.json").is_file());
}

#[test]
fn table_boundary_matches_cosine() {
    let dir = TempDir::new().unwrap();
    let mut csv = String::from("phi,g\n");
    for i in 0..=400 {
        let phi = core::f64::consts::PI * i as f64 / 400.0;
        csv.push_str(&format!("{phi},{}\n", phi.cos() + 2.0));
    }
    std::fs::write(dir.path().join("g.csv"), csv).unwrap();
    let table = kinlayer(dir.path(), &with(&["milne", "--g", "table:g.csv", "--out", "t"]));
    assert!(table.status.success(), "{}", String::from_utf8_lossy(&table.stderr));
    let cos = kinlayer(dir.path(), &with(&["milne", "--g", "cos:1:2", "--out", "c"]));
    let (a, b) = (value(&stdout(&table), "f_infinity"), value(&stdout(&cos), "f_infinity"));
    assert!((a - b).abs() < 1e-3, "{a} vs {b}");
}

#[test]
fn repeated_runs_are_byte_identical() {
    let dir = TempDir::new().unwrap();
    for out in ["a", "b"] {
        let o = kinlayer(dir.path(), &with(&["milne", "--g", "cos:2:1", "--out", out]));
        assert!(o.status.success());
    }
    for name in ["milne.json", "milne_diagnostics.csv"] {
        let a = std::fs::read(dir.path().join("a").join(name)).unwrap();
        let b = std::fs::read(dir.path().join("b").join(name)).unwrap();
        assert!(a == b, "{name} differs");
    }
}

#[test]
fn verify_force_suite_passes() {
    let dir = TempDir::new().unwrap();
    let o = kinlayer(dir.path(), &["verify", "--suite", "force", "--eps", "0.1,0.01"]);
    assert!(o.status.success());
    assert!(stdout(&o).contains("checks passed"));
    let doc = std::fs::read_to_string(dir.path().join("verify.json")).unwrap();
    assert!(doc.contains("\"passed\": true"));
}

#[test]
fn stored_milne_document_round_trips() {
    let dir = TempDir::new().unwrap();
    assert!(kinlayer(dir.path(), &with(&["milne", "--g", "cos:1:2", "--out", "run"])).status.success());
    let o = kinlayer(dir.path(), &["verify", "--suite", "milne", "--input", "run/milne.json", "--out", "check"]);
    assert!(o.status.success(), "{}{}", stdout(&o), String::from_utf8_lossy(&o.stderr));
    assert!(stdout(&o).contains("[PASS] stored invariants reproduced"));

    // perturb one stored value of f
    let path = dir.path().join("run/milne.json");
    let mut doc: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    let cell = &mut doc["f"][3][5];
    *cell = serde_json::json!(cell.as_f64().unwrap() + 0.25);
    std::fs::write(&path, serde_json::to_string_pretty(&doc).unwrap()).unwrap();
    let o = kinlayer(dir.path(), &["verify", "--suite", "milne", "--input", "run/milne.json", "--out", "check"]);
    assert_eq!(o.status.code(), Some(5));
    assert!(stdout(&o).contains("[FAIL] stored invariants reproduced"));

    let o = kinlayer(dir.path(), &["verify", "--suite", "disk", "--input", "run/milne.json"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn disk_writes_slice_and_round_trips() {
    let dir = TempDir::new().unwrap();
    let o = kinlayer(dir.path(), &["disk", "--g", "cos:1:2", "--eps", "0.2", "--n-angles", "16", "--n-r", "60"]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let slice = std::fs::read_to_string(dir.path().join("disk_slice.csv")).unwrap();
    assert_eq!(slice.lines().next(), Some("r,theta,u_bar"));
    let o = kinlayer(dir.path(), &["verify", "--suite", "disk", "--input", "disk.json"]);
    assert!(o.status.success(), "{}", stdout(&o));
}

#[test]
fn expand_writes_error_table() {
    let dir = TempDir::new().unwrap();
    let o = kinlayer(dir.path(), &["expand", "--g", "const:2", "--eps", "0.2,0.1", "--n-angles", "16", "--n-r", "60", "--n-eta", "120", "--length", "25"]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let table = std::fs::read_to_string(dir.path().join("expand.csv")).unwrap();
    let mut lines = table.lines();
    assert_eq!(lines.next(), Some("epsilon,variant,order,sup_error,l2_error"));
    let rows: Vec<_> = lines.collect();
    assert_eq!(rows.len(), 4);
    for row in rows {
        let sup: f64 = row.split(',').nth(3).unwrap().parse().unwrap();
        assert!(sup < 1e-8, "{row}");
    }
    let o = kinlayer(dir.path(), &["expand", "--order", "2"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn grazing_probe_grows() {
    let dir = TempDir::new().unwrap();
    let o = kinlayer(dir.path(), &["probe", "grazing", "--levels", "3"]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    assert!(stdout(&o).contains("derivative growing monotonically: true"));
    let csv = std::fs::read_to_string(dir.path().join("probe_grazing.csv")).unwrap();
    assert_eq!(csv.lines().count(), 4);
}
