use std::process::Command;

use serde_json::Value;

fn kltgeom(args: &[&str]) -> (i32, Value, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_kltgeom")).args(args).output().expect("binary runs");
    let stdout = String::from_utf8(out.stdout).unwrap();
    let report = serde_json::from_str(&stdout).unwrap_or(Value::Null);
    (out.status.code().unwrap(), report, String::from_utf8(out.stderr).unwrap())
}

#[test]
fn dual_hesse_report() {
    let (code, r, _) = kltgeom(&["arrange", "dual-hesse"]);
    assert_eq!(code, 0);
    assert_eq!(r["results"]["points"], 12);
    assert_eq!(r["results"]["lines"], 9);
    assert!(r["results"]["lines_per_point"].as_array().unwrap().iter().all(|d| d == 3));
    assert!(r["results"]["points_per_line"].as_array().unwrap().iter().all(|d| d == 4));
    assert_eq!(r["results"]["verdict"]["overall"], "KLT-CY");
}

#[test]
fn h1_from_a_table_file() {
    let dir = std::env::temp_dir().join(format!("kltgeom-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("z3-inv.json");
    std::fs::write(&path, r#"{"order": 3, "table": [0,1,2, 1,2,0, 2,0,1], "sigma": [0,2,1]}"#).unwrap();
    let (code, r, _) = kltgeom(&["cohom", "h1", "--table", path.to_str().unwrap()]);
    assert_eq!(code, 0);
    assert_eq!(r["results"]["count"], 1);
}

#[test]
fn trivial_distance() {
    let (code, r, _) = kltgeom(&["models", "distance", "--u", "[1,0,0]", "--v", "[1,0,0]"]);
    assert_eq!(code, 0);
    assert_eq!(r["results"]["distance"].as_f64(), Some(0.0));
}

#[test]
fn reports_are_reproducible() {
    let args = ["models", "cat0-sample", "--dim", "3", "--samples", "50", "--seed", "11"];
    let a = Command::new(env!("CARGO_BIN_EXE_kltgeom")).args(args).output().unwrap();
    let b = Command::new(env!("CARGO_BIN_EXE_kltgeom")).args(args).output().unwrap();
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn failed_check_exits_one() {
    let (code, r, _) = kltgeom(&["cohom", "free-check", "--generators", "[[[1,1],[0,1]],[[1,0],[-1,1]]]"]);
    assert_eq!(code, 1);
    assert_eq!(r["pass"], false);
    assert!(r["results"]["witness"].is_array());
}

#[test]
fn free_pair_passes() {
    let (code, r, _) = kltgeom(&["cohom", "free-check", "--word-length", "8"]);
    assert_eq!(code, 0);
    assert_eq!(r["results"]["free_up_to_l"], true);
}

#[test]
fn malformed_input_exits_two_with_location() {
    let (code, _, err) = kltgeom(&["arrange", "check-pair", "--pair", "{\"lattice\": {\"k\": 3},\n \"components\": [}"]);
    assert_eq!(code, 2);
    assert!(err.contains("line 2 column"), "{err}");
}

#[test]
fn usage_errors_exit_two() {
    assert_eq!(kltgeom(&["actions"]).0, 2);
    assert_eq!(kltgeom(&["models", "distance", "--u", "[1,0,0]"]).0, 2);
    assert_eq!(kltgeom(&["models", "distance", "--u", "[2,0,0]", "--v", "[1,0,0]"]).0, 2);
}

#[test]
fn coble_and_lattice_commands() {
    let (code, r, _) = kltgeom(&["arrange", "coble"]);
    assert_eq!(code, 0);
    assert_eq!(r["results"]["verdict"]["overall"], "lc-CY");
    let (code, r, _) = kltgeom(&["lattice", "canonical", "--k", "12"]);
    assert_eq!(code, 0);
    assert_eq!(r["results"]["self_intersection"], "-3/1");
    let (code, r, _) = kltgeom(&["lattice", "intersect", "--k", "2", "--u", "[1,-1,-1]", "--v", "[1,-1,-1]"]);
    assert_eq!(code, 0);
    assert_eq!(r["results"]["intersection"], "-1/1");
}

#[test]
fn action_commands() {
    let boost = "[[[3.7621956910836314,3.626860407847019,0],[3.626860407847019,3.7621956910836314,0],[0,0,1]]]";
    let (code, r, _) = kltgeom(&["actions", "proper-count", "--generators", boost, "--radius", "1.5"]);
    assert_eq!(code, 0);
    assert_eq!(r["results"]["count"], 3);
    let (code, r, _) = kltgeom(&["actions", "dirichlet", "--generators", boost, "--remove-redundant"]);
    assert_eq!(code, 0);
    assert_eq!(r["results"]["side_count"], 2);
    let (code, r, _) = kltgeom(&["actions", "limit-set", "--generators", boost, "--word-length", "12"]);
    assert_eq!(code, 0);
    assert_eq!(r["results"]["limit_points"].as_array().unwrap().len(), 2);
}
