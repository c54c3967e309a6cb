use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;
use tempfile::TempDir;

fn run(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_twocenters"))
        .args(args)
        .arg("--out")
        .arg(dir)
        .env_remove("TWOCENTERS_OUT")
        .output()
        .expect("binary runs")
}

fn files_in(dir: &Path) -> Vec<String> {
    let mut names: Vec<String> = std::fs::read_dir(dir)
        .map(|it| it.map(|e| e.unwrap().file_name().to_string_lossy().into_owned()).collect())
        .unwrap_or_default();
    names.sort();
    names
}

#[test]
fn diagram_writes_csv_and_svg() {
    let dir = TempDir::new().unwrap();
    let out = run(dir.path(), &["diagram", "--resolution", "40"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(files_in(dir.path()), ["diagram.csv", "diagram.svg"]);
    let csv = std::fs::read_to_string(dir.path().join("diagram.csv")).unwrap();
    let mut lines = csv.lines();
    assert_eq!(lines.next(), Some("mu,g,c,label"));
    assert_eq!(lines.count(), 40 * 40);
    let svg = std::fs::read_to_string(dir.path().join("diagram.svg")).unwrap();
    assert!(svg.starts_with("<svg") && svg.contains("width=\"1000\""));
}

#[test]
fn equal_masses_have_no_earth_only_region() {
    let dir = TempDir::new().unwrap();
    let out = run(dir.path(), &["--mu", "0.5", "diagram", "--resolution", "60", "--format", "csv"]);
    assert_eq!(out.status.code(), Some(0));
    let csv = std::fs::read_to_string(dir.path().join("diagram.csv")).unwrap();
    assert!(!csv.lines().any(|l| l.ends_with(",SPrime")));
    assert!(csv.lines().any(|l| l.ends_with(",S")));
}

#[test]
fn outputs_are_deterministic() {
    let args = ["--seed", "7", "homoclinic", "--c", "-1.2", "--orbits", "3"];
    let a = TempDir::new().unwrap();
    let b = TempDir::new().unwrap();
    let (oa, ob) = (run(a.path(), &args), run(b.path(), &args));
    assert_eq!(oa.status.code(), Some(0));
    assert_eq!(oa.stdout, ob.stdout);

    let args = ["family", "--k", "12", "--l", "11", "--c-min", "-2.4", "--c-max", "-2.0", "--count", "5"];
    run(a.path(), &args);
    run(b.path(), &args);
    let fa = std::fs::read(a.path().join("family.csv")).unwrap();
    assert_eq!(fa, std::fs::read(b.path().join("family.csv")).unwrap());
    assert!(String::from_utf8(fa).unwrap().starts_with("k,l,c,g,residual\n"));
}

#[test]
fn orbit_writes_jsonl() {
    let dir = TempDir::new().unwrap();
    let out = run(dir.path(), &["orbit", "--g", "0.3", "--c", "-1.2", "--span", "5", "--format", "svg"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    assert_eq!(files_in(dir.path()), ["orbit.jsonl", "orbit.svg"]);
    let text = std::fs::read_to_string(dir.path().join("orbit.jsonl")).unwrap();
    let rows: Vec<Value> = text.lines().map(|l| serde_json::from_str(l).unwrap()).collect();
    assert!(rows.len() > 10);
    for key in ["s", "lambda", "nu_wrapped", "nu_unwrapped", "p_lambda", "p_nu", "Q", "Q_lambda"] {
        assert!(rows[0].get(key).is_some(), "missing {key}");
    }
    let last = rows.last().unwrap()["s"].as_f64().unwrap();
    assert!((last - 5.0).abs() < 1e-12);
}

#[test]
fn rotation_prints_json() {
    let dir = TempDir::new().unwrap();
    let out = run(dir.path(), &["rotation", "--g", "0.3", "--c", "-1.2", "--component", "both"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert!(v.to_string().contains("1.1699"));
}

#[test]
fn errors_are_json_with_exit_code_two() {
    let dir = TempDir::new().unwrap();
    // inside a forbidden region
    let out = run(dir.path(), &["orbit", "--g", "2.5", "--c", "-0.3"]);
    assert_eq!(out.status.code(), Some(2));
    let err: Value = serde_json::from_slice(&out.stderr).unwrap();
    assert!(err["error"].is_string() && err["message"].is_string());
    assert!(files_in(dir.path()).is_empty(), "partial output left behind");

    let out = run(dir.path(), &["homoclinic", "--c", "-0.2"]);
    assert_eq!(out.status.code(), Some(2));
    let err: Value = serde_json::from_slice(&out.stderr).unwrap();
    assert_eq!(err["error"], "BandError");

    let out = run(dir.path(), &["--mu", "0.5", "homoclinic", "--c", "-1.2"]);
    assert_eq!(out.status.code(), Some(2));
    let err: Value = serde_json::from_slice(&out.stderr).unwrap();
    assert_eq!(err["error"], "ExplicitlyDegenerate");
    assert!(files_in(dir.path()).is_empty());
}

#[test]
fn failing_certificate_exits_with_one() {
    let dir = TempDir::new().unwrap();
    // too loose for the full flow to shadow the leaf orbits
    let out = run(dir.path(), &["--tol", "1e-6", "homoclinic", "--c", "-1.2", "--orbits", "2"]);
    assert_eq!(out.status.code(), Some(1));
    let report: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(report["verdict"], "fail");

    let out = run(dir.path(), &["--tol", "1e-3", "knot", "--c", "-2.2", "--k", "21", "--l", "20"]);
    assert_eq!(out.status.code(), Some(2));
    let err: Value = serde_json::from_slice(&out.stderr).unwrap();
    assert_eq!(err["error"], "NoClosure");
}

#[test]
fn env_overrides_out_flag() {
    let flag_dir = TempDir::new().unwrap();
    let env_dir = TempDir::new().unwrap();
    let out = Command::new(env!("CARGO_BIN_EXE_twocenters"))
        .args(["diagram", "--resolution", "20"])
        .arg("--out")
        .arg(flag_dir.path())
        .env("TWOCENTERS_OUT", env_dir.path())
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    assert!(files_in(flag_dir.path()).is_empty());
    assert_eq!(files_in(env_dir.path()), ["diagram.csv", "diagram.svg"]);
}

#[test]
fn molecule_text_and_json() {
    let dir = TempDir::new().unwrap();
    let text = run(dir.path(), &["molecule", "--c", "-1.4"]);
    assert_eq!(text.status.code(), Some(0));
    let text = String::from_utf8(text.stdout).unwrap();
    assert!(text.contains("hyperbolic") && text.contains("B[1]-A[3]"));
    let json = run(dir.path(), &["molecule", "--c", "-1.4", "--format", "json"]);
    let v: Value = serde_json::from_slice(&json.stdout).unwrap();
    assert_eq!(v.as_array().unwrap().len(), 1);
}
