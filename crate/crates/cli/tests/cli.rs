use std::fs;
use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("calibra-cli-{}", std::process::id()));
    fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

fn write(name: &str, contents: &str) -> PathBuf {
    let path = scratch(name);
    fs::write(&path, contents).unwrap();
    path
}

fn calibra(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_calibra")).args(args).output().expect("binary runs")
}

fn json_ok(args: &[&str]) -> Value {
    let out = calibra(args);
    assert!(out.status.success(), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).unwrap()
}

const BALL: &str = r#"{"center":[0,0,0,0],"shape":[[1,0,0,0],[0,1,0,0],[0,0,1,0],[0,0,0,1]]}"#;
const E12: &str = r#"{"center":[1,2,3,4],"shape":[[1,0,0,0],[0,0.25,0,0],[0,0,1,0],[0,0,0,0.25]]}"#;

#[test]
fn spectrum_of_unit_ball() {
    let path = write("ball.json", BALL);
    let v = json_ok(&["spectrum", "--ellipsoid", path.to_str().unwrap()]);
    for r in v["radii"].as_array().unwrap() {
        assert!((r.as_f64().unwrap() - 1.0).abs() < 1e-12);
    }
}

#[test]
fn width_of_e12_is_pi() {
    let path = write("e12.json", E12);
    let v = json_ok(&["width", "--ellipsoid", path.to_str().unwrap(), "--k", "2"]);
    let w = v["width"].as_f64().unwrap();
    assert!((w - std::f64::consts::PI).abs() < 1e-10);
    assert!((v["k_width"].as_f64().unwrap() - w * w / 2.0).abs() < 1e-12);
}

#[test]
fn classify_reflection() {
    let path = write("refl.json", "[[1,0,0,0],[0,1,0,0],[0,0,-1,0],[0,0,0,-1]]");
    let v = json_ok(&["classify", "--matrix", path.to_str().unwrap()]);
    assert_eq!(v["class"], "AntiSymplectic");
    let v = json_ok(&["power-classify", "--matrix", path.to_str().unwrap(), "--k", "2"]);
    assert_eq!(v["preserves_power"], true);
}

#[test]
fn lagrangian_squeeze_beats_threshold() {
    let v = json_ok(&["squeeze", "--group", "sp", "--n", "2", "--cylinder", "lagrangian", "--budget", "5000", "--restarts", "4"]);
    assert!(v["best_radius"].as_f64().unwrap() < 0.1);
}

#[test]
fn symplectic_sweep_holds_floor() {
    let v = json_ok(&["sweep", "--group", "sp", "--n", "2", "--trials", "500"]);
    assert!(v["min_radius"].as_f64().unwrap() >= 1.0 - 1e-9);
    assert_eq!(v["violations"], 0);
}

#[test]
fn comass_of_g2_phi() {
    let v = json_ok(&["comass", "--form", "g2_phi", "--restarts", "8"]);
    assert!((v["value"].as_f64().unwrap() - 1.0).abs() < 1e-6);
}

#[test]
fn witness_for_scaled_map() {
    let path = write("half.json", "[[0.5,0,0,0],[0,1,0,0],[0,0,0.5,0],[0,0,0,1]]");
    let v = json_ok(&["witness", "--matrix", path.to_str().unwrap()]);
    assert_eq!(v["found"], true);
    assert!(v["witness"]["lambda"].as_f64().unwrap() < 1.0);
}

#[test]
fn slag_check_on_complex_input() {
    let path = write("cplx.json", r#"{"re":[[0.5,0],[0,1]],"im":[[0,0],[0,0]]}"#);
    let v = json_ok(&["slag-check", "--matrix", path.to_str().unwrap()]);
    assert_eq!(v["preserves_omega"], false);
    assert!((v["complex_det"][0].as_f64().unwrap() - 0.5).abs() < 1e-12);
    let w = json_ok(&["witness", "--kind", "slag", "--matrix", path.to_str().unwrap()]);
    assert!(w["witness"]["lambda"].as_f64().unwrap() < 1.0);
}

#[test]
fn exact_forms_eval() {
    let form = write("omega.json", r#"{"dim":2,"degree":2,"terms":[{"idx":[1,2],"re":"1/3"}]}"#);
    let vectors = write("vecs.json", r#"[["1/2","0"],["0","3"]]"#);
    let v = json_ok(&["forms-eval", "--form-file", form.to_str().unwrap(), "--vectors", vectors.to_str().unwrap(), "--exact"]);
    assert_eq!(v["re"], "1/2");
    assert_eq!(v["im"], "0");
}

#[test]
fn squeeze_csv_has_one_row_per_restart() {
    let out = calibra(&["squeeze", "--group", "sp", "--n", "1", "--restarts", "3", "--budget", "50", "--format", "csv"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "restart,seed,component,radius,iterations");
    assert_eq!(lines.len(), 4);
}

#[test]
fn bad_input_exits_with_code_two() {
    let path = write("bad.json", "[[1,2],[3");
    let out = calibra(&["classify", "--matrix", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    let err: Value = serde_json::from_slice(&out.stderr).unwrap();
    assert_eq!(err["error"]["exit_code"], 2);

    let odd = write("odd.json", "[[1,0,0],[0,1,0],[0,0,1]]");
    let out = calibra(&["classify", "--matrix", odd.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn outputs_are_reproducible() {
    let a = scratch("run-a.json");
    let b = scratch("run-b.json");
    for out in [&a, &b] {
        let status = calibra(&["squeeze", "--group", "slnc", "--n", "2", "--cylinder", "lagrangian", "--restarts", "6", "--budget", "200", "--seed", "11", "--out", out.to_str().unwrap()]);
        assert!(status.status.success());
        assert!(status.stdout.is_empty());
    }
    assert_eq!(fs::read(&a).unwrap(), fs::read(&b).unwrap());
    let manifest: Value = serde_json::from_slice(&fs::read(scratch("run-a.json.manifest.json")).unwrap()).unwrap();
    assert_eq!(manifest["command"], "squeeze");
    assert_eq!(manifest["seed"], 11);
    assert_eq!(manifest["parameters"]["restarts"], 6);
    assert!(manifest["parameters"].get("out").is_none());
}

#[test]
fn thread_count_does_not_change_results() {
    let run = |threads: &str| {
        let out = Command::new(env!("CARGO_BIN_EXE_calibra"))
            .env("CALIBRA_THREADS", threads)
            .args(["squeeze", "--group", "sp", "--n", "2", "--restarts", "5", "--budget", "150", "--seed", "3"])
            .output()
            .unwrap();
        assert!(out.status.success());
        out.stdout
    };
    assert_eq!(run("1"), run("4"));
}
