use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;
use sha2::{Digest, Sha256};
use tempfile::TempDir;

fn data(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("../../data")
        .join(name)
}

fn mminv(args: &[&str]) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_mminv"));
    for (k, _) in std::env::vars() {
        if k.starts_with("MMINV_") {
            cmd.env_remove(k);
        }
    }
    cmd.args(args).output().expect("binary runs")
}

fn run(args: &[&str]) -> (i32, Value) {
    let out = mminv(args);
    let code = out.status.code().unwrap();
    let json = serde_json::from_slice(&out.stdout).unwrap_or(Value::Null);
    (code, json)
}

fn write(dir: &TempDir, name: &str, text: &str) -> String {
    let p = dir.path().join(name);
    std::fs::write(&p, text).unwrap();
    p.to_string_lossy().into_owned()
}

fn s(p: PathBuf) -> String {
    p.to_string_lossy().into_owned()
}

#[test]
fn validate_exit_codes() {
    let (code, json) = run(&["validate", &s(data("k4.json"))]);
    assert_eq!(code, 0);
    assert_eq!(json["valid"], true);

    let (code, json) = run(&["validate", &s(data("bad_mass.json"))]);
    assert_eq!(code, 1);
    assert_eq!(json["violations"][0]["axiom"], "mass_sum");

    let dir = TempDir::new().unwrap();
    let broken = write(&dir, "broken.json", "{\"labels\": [");
    assert_eq!(mminv(&["validate", &broken]).status.code(), Some(2));
    assert_eq!(
        mminv(&["validate", "/nonexistent/space.json"])
            .status
            .code(),
        Some(2)
    );
}

#[test]
fn validate_reports_triangle_violation() {
    let dir = TempDir::new().unwrap();
    let p = write(
        &dir,
        "tri.json",
        r#"{"dist": [[0, 1, 5], [1, 0, 1], [5, 1, 0]], "mass": [0.2, 0.3, 0.5]}"#,
    );
    let (code, json) = run(&["validate", &p]);
    assert_eq!(code, 1);
    let axioms: Vec<&str> = json["violations"]
        .as_array()
        .unwrap()
        .iter()
        .map(|v| v["axiom"].as_str().unwrap())
        .collect();
    assert!(axioms.contains(&"triangle"), "{axioms:?}");
}

#[test]
fn invalid_space_is_rejected_by_invariants() {
    assert_eq!(
        mminv(&["invariants", &s(data("bad_mass.json"))])
            .status
            .code(),
        Some(1)
    );
}

#[test]
fn one_point_profile_vanishes() {
    let (code, json) = run(&["invariants", &s(data("one_point.json"))]);
    assert_eq!(code, 0);
    for e in json["profile"]["obs_diam"].as_array().unwrap() {
        assert_eq!(e["value"].as_f64(), Some(0.0));
    }
    for e in json["profile"]["sep"].as_array().unwrap() {
        assert_eq!(e["value"].as_f64(), Some(0.0));
    }
}

#[test]
fn two_point_profile_steps_at_half() {
    let out = mminv(&["invariants", &s(data("two_point.json")), "--format", "csv"]);
    assert!(out.status.success());
    let csv = String::from_utf8(out.stdout).unwrap();
    let mut lines = csv.lines();
    assert_eq!(
        lines.next(),
        Some("family,n,kappa,obs_diam,sep_symmetric,mode")
    );
    for line in lines {
        let cells: Vec<&str> = line.split(',').collect();
        let kappa: f64 = cells[2].parse().unwrap();
        let obs: f64 = cells[3].parse().unwrap();
        assert_eq!(obs, if kappa < 0.5 { 3.0 } else { 0.0 }, "{line}");
    }
}

#[test]
fn grid_and_mode_flags_are_honoured() {
    let (code, json) = run(&[
        "invariants",
        &s(data("k4.json")),
        "--grid",
        "0.2,0.6",
        "--mode",
        "grid",
    ]);
    assert_eq!(code, 0);
    let obs = json["profile"]["obs_diam"].as_array().unwrap();
    assert_eq!(obs.len(), 2);
    assert_eq!(json["profile"]["mode"]["kind"], "grid");
    assert_eq!(
        mminv(&["invariants", &s(data("k4.json")), "--grid", "0.6,0.2"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(
        mminv(&["invariants", &s(data("k4.json")), "--mode", "fast"])
            .status
            .code(),
        Some(2)
    );
}

fn digest(path: &Path) -> Vec<u8> {
    Sha256::digest(std::fs::read(path).unwrap()).to_vec()
}

#[test]
fn repeated_runs_are_byte_identical() {
    let dir = TempDir::new().unwrap();
    let space = write(
        &dir,
        "cloud.json",
        r#"{"dist": [[0, 1, 2, 2.5, 3, 1.5, 2, 1.2, 2.2],
                    [1, 0, 1, 1.5, 2, 2.5, 3, 2.2, 1.2],
                    [2, 1, 0, 0.5, 1, 3.5, 4, 3.2, 2.2],
                    [2.5, 1.5, 0.5, 0, 0.5, 4, 4.5, 3.7, 2.7],
                    [3, 2, 1, 0.5, 0, 4.5, 5, 4.2, 3.2],
                    [1.5, 2.5, 3.5, 4, 4.5, 0, 0.5, 0.3, 1.3],
                    [2, 3, 4, 4.5, 5, 0.5, 0, 0.8, 1.8],
                    [1.2, 2.2, 3.2, 3.7, 4.2, 0.3, 0.8, 0, 1],
                    [2.2, 1.2, 2.2, 2.7, 3.2, 1.3, 1.8, 1, 0]],
           "mass": [0.1, 0.1, 0.1, 0.1, 0.1, 0.1, 0.1, 0.15, 0.15]}"#,
    );
    let mut hashes = Vec::new();
    for i in 0..2 {
        let out = dir.path().join(format!("run{i}.json"));
        let o = mminv(&[
            "invariants",
            &space,
            "--mode",
            "heuristic",
            "--seed",
            "7",
            "--out",
            &s(out.clone()),
        ]);
        assert!(o.status.success());
        hashes.push(digest(&out));
    }
    assert_eq!(hashes[0], hashes[1]);

    let mut family = Vec::new();
    for i in 0..2 {
        let out = dir.path().join(format!("family{i}.csv"));
        let o = mminv(&[
            "family",
            &s(data("two_cluster.toml")),
            "--format",
            "csv",
            "--out",
            &s(out.clone()),
        ]);
        assert!(o.status.success());
        family.push(digest(&out));
    }
    assert_eq!(family[0], family[1]);
}

#[test]
fn seed_is_echoed() {
    let (_, json) = run(&["invariants", &s(data("k4.json")), "--seed", "42"]);
    assert_eq!(json["seed"], 42);
    assert_eq!(json["config"]["heuristic"]["seed"], 42);
}

#[test]
fn compare_space_with_itself() {
    let k4 = s(data("k4.json"));
    let (code, json) = run(&["compare", &k4, &k4]);
    assert_eq!(code, 0);
    assert_eq!(json["prokhorov"].as_f64(), Some(0.0));
    assert_eq!(json["box_upper"]["value"].as_f64(), Some(0.0));
    assert_eq!(json["x_dominates_y"]["dominates"], true);
    assert_eq!(json["y_dominates_x"]["dominates"], true);
}

#[test]
fn compare_point_with_two_points() {
    let (code, json) = run(&[
        "compare",
        &s(data("one_point.json")),
        &s(data("two_point.json")),
    ]);
    assert_eq!(code, 0);
    // a point is dominated by everything and dominates only points
    assert_eq!(json["x_dominates_y"]["dominates"], false);
    assert_eq!(json["y_dominates_x"]["dominates"], true);
    assert!(json["prokhorov"].is_null());
    assert!(json["box_upper"]["value"].as_f64().unwrap() > 0.0);
    let skipped: Vec<&str> = json["skipped"]
        .as_array()
        .unwrap()
        .iter()
        .map(|v| v["section"].as_str().unwrap())
        .collect();
    assert!(skipped.contains(&"prokhorov"));
}

#[test]
fn compare_falls_back_when_over_budget() {
    let (code, json) = run(&[
        "compare",
        &s(data("two_point.json")),
        &s(data("k4.json")),
        "--budget",
        "2",
    ]);
    assert_eq!(code, 0);
    assert!(json["x_dominates_y"]["necessary"].is_object());
    assert!(json["x_dominates_y"]["exact"].is_null());
}

fn verdicts(json: &Value) -> Vec<String> {
    json["report"]["verdicts"]
        .as_array()
        .unwrap()
        .iter()
        .map(|v| v["verdict"].as_str().unwrap().to_string())
        .collect()
}

#[test]
fn complete_graph_family_has_phase_transition() {
    let (code, json) = run(&["family", &s(data("complete_graph.toml"))]);
    assert_eq!(code, 0);
    assert_eq!(json["report"]["phase"]["positive"], true);
    assert!(verdicts(&json).contains(&"phase_transition".to_string()));
}

#[test]
fn two_point_family_has_none() {
    let (code, json) = run(&["family", &s(data("two_point_family.json"))]);
    assert_eq!(code, 0);
    assert_eq!(json["report"]["phase"]["positive"], false);
    assert_eq!(json["report"]["levy"]["levy"], false);
    assert!(!verdicts(&json).contains(&"phase_transition".to_string()));
}

#[test]
fn two_cluster_family_is_two_levy() {
    let (code, json) = run(&["family", &s(data("two_cluster.toml"))]);
    assert_eq!(code, 0);
    assert_eq!(json["report"]["n_levy"]["n"], 2);
}

#[test]
fn generator_overflow_is_an_error() {
    let dir = TempDir::new().unwrap();
    let p = write(
        &dir,
        "cube.toml",
        "[spec]\ngenerator = \"hypercube_hamming\"\nn_min = 20\nn_max = 20\n",
    );
    let out = mminv(&["family", &p]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("error"));
}

#[test]
fn unknown_family_field_is_a_usage_error() {
    let dir = TempDir::new().unwrap();
    let p = write(
        &dir,
        "bad.toml",
        "[spec]\ngenerator = \"moebius\"\nn_min = 2\nn_max = 3\n",
    );
    assert_eq!(mminv(&["family", &p]).status.code(), Some(2));
}

#[test]
fn config_file_and_environment_precedence() {
    let dir = TempDir::new().unwrap();
    let conf = write(
        &dir,
        "run.toml",
        "grid = \"0.3\"\nseed = 5\nformat = \"json\"\n",
    );
    let k4 = s(data("k4.json"));

    let (_, json) = run(&["invariants", &k4, "--config", &conf]);
    assert_eq!(json["seed"], 5);
    assert_eq!(json["profile"]["obs_diam"].as_array().unwrap().len(), 1);

    let out = Command::new(env!("CARGO_BIN_EXE_mminv"))
        .args(["invariants", &k4, "--config", &conf])
        .env("MMINV_SEED", "9")
        .env("MMINV_GRID", "0.2,0.4")
        .output()
        .unwrap();
    let json: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(json["seed"], 9);
    assert_eq!(json["profile"]["obs_diam"].as_array().unwrap().len(), 2);

    let out = Command::new(env!("CARGO_BIN_EXE_mminv"))
        .args(["invariants", &k4, "--config", &conf, "--seed", "11"])
        .env("MMINV_SEED", "9")
        .output()
        .unwrap();
    let json: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(json["seed"], 11);

    let bad = write(&dir, "bad.toml", "colour = \"red\"\n");
    assert_eq!(
        mminv(&["invariants", &k4, "--config", &bad]).status.code(),
        Some(2)
    );
}

#[test]
fn extended_space_reports_domain_errors() {
    let out = mminv(&[
        "invariants",
        &s(data("extended.json")),
        "--grid",
        "0.25,0.75",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let json: Value = serde_json::from_slice(&out.stdout).unwrap();
    for e in json["profile"]["obs_diam"].as_array().unwrap() {
        assert!(e["value"].is_null());
        assert!(e["error"].as_str().unwrap().contains("finite"));
    }
    assert!(String::from_utf8_lossy(&out.stderr).contains("warning"));
}
