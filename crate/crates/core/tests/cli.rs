use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::{json, Value};
use tempfile::TempDir;

use exterior_wave::harness::{SweepConfig, CSV_HEADER};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_exterior-wave"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn small_config() -> Value {
    json!({
        "c": 1, "T": 1, "R_out": 2,
        "phi": {"kind": "bump", "amplitude": 1, "support_radius": 1},
        "psi": {"kind": "bump", "amplitude": 0.5, "support_radius": 1},
        "eps_list": [0.2, 0.1, 0.05],
        "time_samples": 9
    })
}

fn write(dir: &TempDir, name: &str, body: &str) -> PathBuf {
    let p = dir.path().join(name);
    std::fs::write(&p, body).unwrap();
    p
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn sweep_writes_csv_with_exact_header() {
    let dir = TempDir::new().unwrap();
    let cfg = write(&dir, "c.json", &small_config().to_string());
    let report = dir.path().join("r.json");
    let plot = dir.path().join("p.dat");
    for bc in ["neumann", "dirichlet"] {
        let out = run(&["sweep", "--bc", bc, "--config", s(&cfg), "--json", s(&report), "--plot", s(&plot)]);
        assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
        let text = String::from_utf8(out.stdout).unwrap();
        let mut lines = text.lines();
        assert_eq!(lines.next(), Some("eps,sup_norm,argmax_t,D,E1,E2,identity1_residual,identity2_residual"));
        assert_eq!(CSV_HEADER.join(","), "eps,sup_norm,argmax_t,D,E1,E2,identity1_residual,identity2_residual");
        let rows: Vec<&str> = lines.collect();
        assert_eq!(rows.len(), 3);
        for row in &rows {
            let fields: Vec<&str> = row.split(',').collect();
            assert_eq!(fields.len(), 8);
            let e2_present = !fields[5].is_empty();
            assert_eq!(e2_present, bc == "neumann", "{row}");
        }
        let rep: Value = serde_json::from_str(&std::fs::read_to_string(&report).unwrap()).unwrap();
        assert_eq!(rep["rows"].as_array().unwrap().len(), 3);
        assert_eq!(std::fs::read_to_string(&plot).unwrap().lines().count(), 4);
        assert!(String::from_utf8_lossy(&out.stderr).contains("fitted rate"));
    }
}

#[test]
fn invalid_configs_exit_2() {
    let dir = TempDir::new().unwrap();
    let mut cases = vec![("bad.json", "{\"c\": ".to_string())];
    let mut v = small_config();
    v["eps_list"] = json!([0.05, 0.1]);
    cases.push(("increasing.json", v.to_string()));
    let mut v = small_config();
    v["colour"] = json!("blue");
    cases.push(("unknown.json", v.to_string()));
    let mut v = small_config();
    v["eps_list"] = json!([0.9]);
    cases.push(("too_big.json", v.to_string()));
    for (name, body) in cases {
        let cfg = write(&dir, name, &body);
        let out = run(&["sweep", "--bc", "neumann", "--config", s(&cfg)]);
        assert_eq!(out.status.code(), Some(2), "{name}");
        assert!(out.stdout.is_empty(), "{name}");
    }
    let out = run(&["sweep", "--bc", "neumann", "--config", s(&dir.path().join("missing.json"))]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn bad_arguments_exit_2() {
    let dir = TempDir::new().unwrap();
    let cfg = write(&dir, "c.json", &small_config().to_string());
    assert_eq!(run(&["sweep", "--bc", "robin", "--config", s(&cfg)]).status.code(), Some(2));
    assert_eq!(run(&["sweep", "--config", s(&cfg)]).status.code(), Some(2));
    assert_eq!(run(&["eval", "--bc", "neumann", "--eps", "-0.1", "--t", "0.5", "--r", "0.5"]).status.code(), Some(2));
    assert_eq!(run(&["oracle", "--bc", "cauchy", "--h", "0.01", "--cfl", "1.5"]).status.code(), Some(2));
    assert_eq!(run(&["frobnicate"]).status.code(), Some(2));
}

#[test]
fn verify_zero_data_passes() {
    let dir = TempDir::new().unwrap();
    let mut v = small_config();
    v["phi"]["amplitude"] = json!(0);
    v["psi"]["amplitude"] = json!(0);
    let cfg = write(&dir, "zero.json", &v.to_string());
    let out = run(&["verify", "--config", s(&cfg)]);
    let text = String::from_utf8(out.stdout).unwrap();
    assert_eq!(out.status.code(), Some(0), "{text}");
    assert!(text.lines().filter(|l| l.starts_with("PASS")).count() >= 9, "{text}");
    assert!(!text.contains("FAIL"));
}

#[test]
fn eval_matches_library() {
    let out = run(&["eval", "--bc", "dirichlet", "--eps", "0.1", "--t", "0.5", "--r", "0.05"]);
    assert_eq!(out.status.code(), Some(0));
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["r"], json!(0.05));
    let u = v["jet"]["value"].as_f64().unwrap();
    assert!(u.is_finite());

    // inside the ball the extension of the Dirichlet solution, outside it the solution
    let sc = SweepConfig::default();
    let (phi, psi) = sc.profiles().unwrap();
    let reg = exterior_wave::harness::ProblemRegistry::builtin();
    let p = reg.get("dirichlet").unwrap();
    let case = p.build(&phi, &psi, sc.wave(), 0.1).unwrap();
    use exterior_wave::closed_form::SolutionEvaluator;
    assert_eq!(case.extended.jet(0.5, 0.05).unwrap().value, u);
}

#[test]
fn oracle_reports_small_difference() {
    let out = run(&["oracle", "--bc", "neumann", "--eps", "0.1", "--h", "0.004"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    let diff = v["max_abs_diff"].as_f64().unwrap();
    assert!(diff > 0.0 && diff < 0.05, "{diff}");
    assert!(v["k"].as_f64().unwrap() <= 0.9 * 0.004 + 1e-15);
}
