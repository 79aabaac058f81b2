use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;

fn sixforms(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_sixforms"))
        .args(args)
        .output()
        .unwrap()
}

fn data(rel: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../../data")
        .join(rel)
        .display()
        .to_string()
}

fn stdout_json(o: &Output) -> Value {
    serde_json::from_slice(&o.stdout).unwrap()
}

fn read_json(p: &Path) -> Value {
    serde_json::from_slice(&std::fs::read(p).unwrap()).unwrap()
}

#[test]
fn classify_bundled_forms() {
    let o = sixforms(&["classify", "gl/O-"]);
    assert!(o.status.success());
    let v = stdout_json(&o);
    assert_eq!(v["gl_orbit"], "O-");
    assert_eq!(v["Q"].as_f64(), Some(-16.0));
    assert_eq!(v["backend"], "rational");

    let v = stdout_json(&sixforms(&["classify", "sp/O0+", "--omega", "standard"]));
    assert_eq!(v["sp_orbit"], "O0+");
    assert_eq!(v["signature"], serde_json::json!([3, 3, 0]));
}

#[test]
fn classify_zero_form_and_out_file() {
    let dir = tempfile::tempdir().unwrap();
    let zero = dir.path().join("zero.json");
    std::fs::write(&zero, "[]").unwrap();
    let out = dir.path().join("report.json");
    let o = sixforms(&["classify", zero.to_str().unwrap(), "--out", out.to_str().unwrap()]);
    assert!(o.status.success());
    assert_eq!(read_json(&out)["gl_orbit"], "O6");
    assert_eq!(read_json(&out), stdout_json(&o));
}

#[test]
fn bad_inputs_exit_with_2() {
    assert_eq!(sixforms(&["classify", "no-such-form"]).status.code(), Some(2));
    // e123 is not primitive, so it has no symplectic orbit.
    let dir = tempfile::tempdir().unwrap();
    let f = dir.path().join("e123.json");
    std::fs::write(&f, r#"[{"axes":[1,2,3],"coeff":1}]"#).unwrap();
    assert_eq!(
        sixforms(&["classify", f.to_str().unwrap(), "--omega", "standard"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(sixforms(&["verify", "no-such-suite"]).status.code(), Some(2));
}

#[test]
fn corrupted_hat_map_is_caught() {
    let dir = tempfile::tempdir().unwrap();
    let o = sixforms(&[
        "verify",
        "lemma-bc",
        "--trials",
        "5",
        "--corrupt-hat",
        "--out",
        dir.path().to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("counterexample"));
    let report = read_json(&dir.path().join("lemma-bc.json"));
    assert_eq!(report["passed"], false);
    assert_eq!(report["counterexample"]["check"], "hat_map_vs_f");
}

#[test]
fn verify_writes_passing_report() {
    let dir = tempfile::tempdir().unwrap();
    let o = sixforms(&[
        "verify",
        "identities",
        "--trials",
        "20",
        "--seed",
        "3",
        "--out",
        dir.path().to_str().unwrap(),
    ]);
    assert!(o.status.success());
    let report = read_json(&dir.path().join("identities.json"));
    assert_eq!(report["passed"], true);
    assert_eq!(report["seed"], 3);
    assert_eq!(report["trials"], 20);
}

#[test]
fn nil_flow_with_h_zero_tends_to_e135() {
    let dir = tempfile::tempdir().unwrap();
    let o = sixforms(&[
        "flow",
        "nil",
        &data("coords/nil-linear.json"),
        "--t-max",
        "1e7",
        "--out",
        dir.path().to_str().unwrap(),
    ]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let status = read_json(&dir.path().join("status.json"));
    assert_eq!(status["status"]["status"], "reached_t_max");
    assert_eq!(status["limit_orbit"], "O3");
    assert_eq!(status["nil"]["H"].as_f64(), Some(0.0));
    let csv = std::fs::read_to_string(dir.path().join("trajectory.csv")).unwrap();
    assert!(csv.starts_with("t,A,B,C,D,E,F,G,H,I,J,K,L,M,N,A_closed_form\n"));
}

#[test]
fn solv_flow_blows_up() {
    let dir = tempfile::tempdir().unwrap();
    let o = sixforms(&[
        "flow",
        "solv",
        &data("coords/solv-positive.json"),
        "--require-positive",
        "--out",
        dir.path().to_str().unwrap(),
    ]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let status = stdout_json(&o);
    assert_eq!(status["status"]["status"], "blow_up");
    let t_b = status["status"]["t_b"].as_f64().unwrap();
    let printed = status["solv"]["t_prime_printed"]["value"].as_f64().unwrap();
    assert!(t_b <= printed);
    assert!(status["solv"]["positivity"]["same_sign"].as_bool().unwrap());
}

#[test]
fn require_positive_refuses_bad_data() {
    let dir = tempfile::tempdir().unwrap();
    let o = sixforms(&[
        "flow",
        "solv",
        &data("coords/solv-not-positive.json"),
        "--require-positive",
        "--out",
        dir.path().to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("positivity"));
    assert!(!dir.path().join("status.json").exists());
}

#[test]
fn abelian_flow_is_stationary() {
    let dir = tempfile::tempdir().unwrap();
    let o = sixforms(&[
        "flow",
        "abelian",
        &data("coords/abelian.json"),
        "--out",
        dir.path().to_str().unwrap(),
    ]);
    assert!(o.status.success());
    let status = stdout_json(&o);
    assert_eq!(status["status"]["status"], "converged");
    assert_eq!(status["t_final"].as_f64(), Some(0.0));
}
