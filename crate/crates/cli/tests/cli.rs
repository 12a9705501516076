use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;
use tempfile::TempDir;

fn write_config(dir: &TempDir, name: &str, json: &str) -> PathBuf {
    let p = dir.path().join(name);
    fs::write(&p, json).unwrap();
    p
}

fn maxsat(args: &[&str], config: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_maxsat")).args(args).arg("--config").arg(config).output().unwrap()
}

fn code(o: &Output) -> i32 {
    o.status.code().unwrap()
}

fn json(o: &Output) -> Value {
    serde_json::from_slice(&o.stdout).unwrap()
}

const EX8: &str = r#"{"schema":1,"system":{"type":"builtin","name":"example8"}}"#;
const LDGM: &str = r#"{"schema":1,"system":{"type":"ldgm","lambda":{"edge":"x^5"},
    "rho":{"node":"2/15 x + 1/15 x^2 + 7/15 x^3 + 1/3 x^4"}}}"#;

#[test]
fn config_errors_exit_with_2() {
    let dir = TempDir::new().unwrap();
    let cases = [
        r#"{"schema":1,"system":{"type":"gldpc","n":31,"t":4,"bogus":1}}"#,
        r#"{"schema":1,"system":{"type":"cs","prior":{"gaussian":{"variance":1}},"sigma2":-1,"delta":0.5}}"#,
        r#"{"schema":9,"system":{"type":"builtin","name":"example1"}}"#,
        r#"{"schema":1,"system":{"type":"builtin","name":"example8"},"command":{"name":"thresholds"}}"#,
        "not json",
    ];
    for (i, c) in cases.iter().enumerate() {
        let p = write_config(&dir, &format!("c{i}.json"), c);
        let o = maxsat(&["coupled-run", "--eps", "0.5", "--N", "10", "--w", "2"], &p);
        assert_eq!(code(&o), 2, "{c}: {}", String::from_utf8_lossy(&o.stderr));
    }
    let p = write_config(&dir, "ok.json", EX8);
    // eps outside [0, 1], missing eps, missing N, too few curve points.
    assert_eq!(code(&maxsat(&["coupled-run", "--eps", "1.5", "--N", "10", "--w", "2"], &p)), 2);
    assert_eq!(code(&maxsat(&["coupled-run", "--N", "10", "--w", "2"], &p)), 2);
    assert_eq!(code(&maxsat(&["coupled-run", "--eps", "0.5", "--w", "2"], &p)), 2);
    let few = write_config(
        &dir,
        "few.json",
        r#"{"schema":1,"system":{"type":"builtin","name":"example1"},"command":{"x_grid":{"start":0,"stop":1,"points":50}}}"#,
    );
    assert_eq!(code(&maxsat(&["potential-curve"], &few)), 2);
    assert_eq!(code(&maxsat(&["thresholds"], &dir.path().join("missing.json"))), 2);
    assert_eq!(code(&maxsat(&["no-such-command"], &p)), 2);
}

#[test]
fn non_convergence_exits_3_with_partial_profile() {
    let dir = TempDir::new().unwrap();
    let p = write_config(
        &dir,
        "c.json",
        r#"{"schema":1,"system":{"type":"builtin","name":"example8"},"command":{"max_iters":5}}"#,
    );
    let out = dir.path().join("run.csv");
    let o = maxsat(&["coupled-run", "--eps", "0.64", "--N", "100", "--w", "5", "--out", out.to_str().unwrap()], &p);
    assert_eq!(code(&o), 3);
    let csv = fs::read_to_string(&out).unwrap();
    assert_eq!(csv.lines().count(), 1 + 104);
    let meta: Value = serde_json::from_str(&fs::read_to_string(dir.path().join("run.csv.meta.json")).unwrap()).unwrap();
    assert_eq!(meta["converged"], false);
    assert_eq!(meta["iterations"], 5);
}

#[test]
fn undefined_threshold_request_exits_4() {
    let dir = TempDir::new().unwrap();
    let p = write_config(&dir, "ldgm.json", LDGM);
    let o = maxsat(&["thresholds"], &p);
    assert_eq!(code(&o), 0);
    let v = json(&o);
    assert_eq!(v["eps_c"], "undefined");
    assert!(v["eps_c_reason"].is_string());
    assert!(!v["rows"].as_array().unwrap().is_empty(), "inverse-Psi table");
    let req = LDGM.replace("}}}", r#"}},"command":{"threshold":"eps_c"}}"#);
    let p = write_config(&dir, "req.json", &req);
    assert_eq!(code(&maxsat(&["thresholds"], &p)), 4);
}

#[test]
fn csv_is_bit_identical_across_runs() {
    let dir = TempDir::new().unwrap();
    let p = write_config(
        &dir,
        "c.json",
        r#"{"schema":1,"system":{"type":"builtin","name":"example9"},
            "command":{"n":60,"w":4,"eps_grid":{"start":0.4,"stop":0.6,"points":11}}}"#,
    );
    let a = maxsat(&["exit-curves"], &p);
    let b = maxsat(&["exit-curves"], &p);
    assert_eq!(code(&a), 0);
    assert_eq!(a.stdout, b.stdout);
    let text = String::from_utf8(a.stdout).unwrap();
    assert!(text.starts_with("series,eps,exit,x\r\n"));
    for series in ["ebp", "map", "sc-finite"] {
        assert!(text.lines().any(|l| l.starts_with(series)), "{series}");
    }
    // Every float cell carries 17 significant digits.
    let row = text.lines().find(|l| l.starts_with("map,")).unwrap();
    for cell in row.split(',').skip(1) {
        let mantissa = cell.split('e').next().unwrap().trim_start_matches('-').replace('.', "");
        assert_eq!(mantissa.len(), 17, "{cell}");
    }
}

#[test]
fn flags_override_the_config() {
    let dir = TempDir::new().unwrap();
    let p = write_config(
        &dir,
        "c.json",
        r#"{"schema":1,"system":{"type":"builtin","name":"example1"},
            "command":{"eps":0.9,"n":5,"w":2,"format":"csv"}}"#,
    );
    let o = maxsat(&["coupled-run", "--N", "7", "--eps", "0.95", "--format", "json"], &p);
    assert_eq!(code(&o), 0);
    let v = json(&o);
    assert_eq!(v["n"], 7);
    assert_eq!(v["w"], 2);
    assert_eq!(v["eps"], 0.95);
    assert_eq!(v["rows"].as_array().unwrap().len(), 8);
}

#[test]
fn potential_curves_of_the_examples() {
    let dir = TempDir::new().unwrap();
    let p = write_config(&dir, "e1.json", r#"{"schema":1,"system":{"type":"builtin","name":"example1"}}"#);
    let v = json(&maxsat(&["potential-curve", "--format", "json"], &p));
    assert_eq!(v["x_upper_star"], 0.0);
    let gap = v["delta_gap"].as_f64().unwrap();
    assert!((0.008..=0.012).contains(&gap));
    assert_eq!(v["finite_w"], "finite_by_stability");
    let rows = v["rows"].as_array().unwrap();
    assert!(rows.iter().filter(|r| r["series"] == "curve").count() >= 400);
    assert!(rows.iter().any(|r| r["series"] == "minimizer" && r["x"] == 0.0));

    let p = write_config(
        &dir,
        "e3.json",
        r#"{"schema":1,"system":{"type":"builtin","name":"example3"},
            "command":{"x_grid":{"start":0.01,"stop":0.1,"points":2000}}}"#,
    );
    let v = json(&maxsat(&["potential-curve", "--format", "json"], &p));
    assert_eq!(v["finite_w"], "unknown");
    let u: Vec<f64> = v["rows"]
        .as_array()
        .unwrap()
        .iter()
        .filter(|r| r["series"] == "curve")
        .map(|r| r["u_s"].as_f64().unwrap())
        .collect();
    let minima = u.windows(3).filter(|w| w[1] < w[0] && w[1] < w[2]).count();
    assert!(minima >= 5, "{minima}");
}

#[test]
fn width_one_run_is_the_uncoupled_fixed_point() {
    let dir = TempDir::new().unwrap();
    let p = write_config(&dir, "e1.json", r#"{"schema":1,"system":{"type":"builtin","name":"example1"}}"#);
    let v = json(&maxsat(&["coupled-run", "--N", "6", "--w", "1", "--format", "json"], &p));
    let rows = v["rows"].as_array().unwrap();
    let first = rows[0]["x"].as_f64().unwrap();
    assert!(first > 0.9);
    assert!(rows.iter().all(|r| (r["x"].as_f64().unwrap() - first).abs() <= 1e-10));
}

#[test]
fn gldpc_thresholds_report() {
    let dir = TempDir::new().unwrap();
    let p = write_config(&dir, "g.json", r#"{"schema":1,"system":{"type":"gldpc","n":31,"t":4}}"#);
    let v = json(&maxsat(&["thresholds"], &p));
    assert_eq!(v["eps_stab"], 1.0);
    let c = v["eps_c"].as_f64().unwrap();
    assert!(c < 1.0);
    assert!((c - v["eps_maxwell"].as_f64().unwrap()).abs() <= 1e-6);
}

#[test]
fn verify_passes_and_catches_an_injected_bug() {
    let dir = TempDir::new().unwrap();
    let p = write_config(&dir, "all.json", r#"{"schema":1}"#);
    let o = maxsat(&["verify"], &p);
    assert_eq!(code(&o), 0);
    let v = json(&o);
    assert_eq!(v["all_passed"], true);
    let rows = v["rows"].as_array().unwrap();
    let e3 = rows.iter().find(|r| r["system"] == "example3" && r["suite"] == "finite_width").unwrap();
    assert_eq!(e3["status"], "unknown");

    let p = write_config(&dir, "bug.json", r#"{"schema":1,"command":{"inject_bug":"negated_gradient"}}"#);
    let o = maxsat(&["verify"], &p);
    assert_eq!(code(&o), 1);
    let v = json(&o);
    assert_eq!(v["all_passed"], false);
    for r in v["rows"].as_array().unwrap() {
        let failed = r["status"] == "fail";
        assert_eq!(failed, r["suite"] == "gradient", "{r}");
    }
}

#[test]
fn scalar_only_systems_reject_family_commands() {
    let dir = TempDir::new().unwrap();
    let p = write_config(
        &dir,
        "cs.json",
        r#"{"schema":1,"system":{"type":"cs","prior":{"gaussian":{"variance":1}},"sigma2":0.05,"delta":0.5}}"#,
    );
    assert_eq!(code(&maxsat(&["thresholds"], &p)), 2);
    let o = maxsat(&["coupled-run", "--N", "32", "--w", "4", "--format", "json"], &p);
    assert_eq!(code(&o), 0);
    let v = json(&o);
    assert!(v["max"].as_f64().unwrap() <= v["x_upper_star"].as_f64().unwrap() + 0.01);
}
