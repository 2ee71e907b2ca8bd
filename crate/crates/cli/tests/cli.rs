use std::path::PathBuf;
use std::process::Command;

use serde_json::Value;

use flatveech::billiard::enumerate_generalized_diagonals;
use flatveech::fixtures::unit_square;
use flatveech::numerics::Exact;
use flatveech::stable::fixtures;

fn data(rel: &str) -> String {
    let p: PathBuf = [env!("CARGO_MANIFEST_DIR"), "..", "..", "data", rel].iter().collect();
    p.to_string_lossy().into_owned()
}

fn run(args: &[&str]) -> (i32, Value, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_flatveech")).args(args).output().expect("binary runs");
    let stdout = String::from_utf8(out.stdout).unwrap();
    let json = serde_json::from_str(&stdout).unwrap_or(Value::Null);
    (out.status.code().unwrap_or(-1), json, String::from_utf8(out.stderr).unwrap())
}

#[test]
fn square_analysis_is_rational() {
    let (code, v, _) = run(&["polygon-analyze", &data("polygons/square.json")]);
    assert_eq!(code, 0);
    assert_eq!(v["schema_version"], 1);
    assert_eq!(v["tool"]["version"], flatveech::VERSION);
    let angles = v["result"]["angles"].as_array().unwrap();
    assert_eq!(angles.len(), 4);
    assert!(angles.iter().all(|a| a["exact"] == "1/2" && a["radius"] == "0"));
    assert_eq!(v["result"]["classification"]["class"], "rational");
}

#[test]
fn quadratic_angle_is_flagged_irrational() {
    let (code, v, _) = run(&["polygon-analyze", &data("polygons/irrational_triangle.json")]);
    assert_eq!(code, 0);
    assert_eq!(v["result"]["classification"]["class"], "irrational");
    assert_eq!(v["result"]["classification"]["witness_index"], 1);
    assert_eq!(v["result"]["rotation_group"]["free_rank"], 1);
}

#[test]
fn malformed_input_exits_2() {
    let (code, v, err) = run(&["polygon-analyze", &data("polygons/malformed.json")]);
    assert_eq!(code, 2);
    assert!(err.contains("zero"));
    assert_eq!(v["error"]["kind"], "invalid_input");
    let (code, _, _) = run(&["polygon-analyze", "/nonexistent/table.json"]);
    assert_eq!(code, 2);
}

#[test]
fn square_census_matches_library() {
    let (code, v, _) = run(&["diagonals", &data("polygons/square.json"), "--length-bound", "3"]);
    assert_eq!(code, 0);
    let expected = enumerate_generalized_diagonals(&unit_square(), &Exact::int(3)).unwrap();
    assert_eq!(v["result"]["count"], expected.len());
    let first = &v["result"]["census"]["diagonals"][0];
    assert_eq!(first["length_squared"], "2");
    assert!(first["length"].as_str().unwrap().starts_with("1.41421356237"));
    assert!(!first["length_radius"].as_str().unwrap().is_empty());
}

#[test]
fn zero_bound_gives_empty_census() {
    let (code, v, _) = run(&["diagonals", &data("polygons/square.json"), "--length-bound", "0"]);
    assert_eq!(code, 0);
    assert_eq!(v["result"]["count"], 0);
}

#[test]
fn exhausted_budget_exits_4() {
    let (code, v, _) =
        run(&["diagonals", &data("polygons/square.json"), "--length-bound", "40", "--node-budget", "50"]);
    assert_eq!(code, 4);
    assert_eq!(v["result"]["census"]["partial"], true);
}

#[test]
fn unfold_reports_genus() {
    let (code, v, _) = run(&["unfold", &data("polygons/pi_over_8.json")]);
    assert_eq!(code, 0);
    assert_eq!(v["result"]["construction"]["mode"], "exact");
    assert_eq!(v["result"]["surface"]["genus"], 2);
    assert_eq!(v["result"]["surface"]["copies"].as_array().unwrap().len(), 16);
    let (code, v, _) = run(&["unfold", &data("polygons/irrational_triangle.json"), "--depth", "2"]);
    assert_eq!(code, 0);
    assert_eq!(v["result"]["construction"]["depth"], 2);
    assert_eq!(v["result"]["surface"]["is_truncated"], true);
}

fn statuses(v: &Value) -> Vec<(String, String)> {
    v["result"]["report"]["checklist"]
        .as_array()
        .unwrap()
        .iter()
        .map(|c| (c["anchor"].as_str().unwrap().to_string(), c["status"].as_str().unwrap().to_string()))
        .collect()
}

#[test]
fn veech_checklists() {
    let (code, v, _) = run(&["veech", &data("polygons/square.json")]);
    assert_eq!(code, 0);
    assert_eq!(statuses(&v)[0], ("hypothesis-irrational-angle".into(), "fail".into()));
    let (code, v, _) = run(&["veech", &data("polygons/irrational_triangle.json")]);
    assert_eq!(code, 0);
    assert!(statuses(&v).iter().all(|(_, s)| s == "pass" || s == "cited"));
    assert_eq!(v["result"]["report"]["conclusion"]["kind"], "contained_in_so2");
    let (code, v, _) = run(&["veech", &data("polygons/unbounded.json")]);
    assert_eq!(code, 0);
    assert!(v["result"]["report"]["truncation_caveat"].is_string());
}

#[test]
fn stable_verdicts() {
    for (file, verdict) in
        [("figure2.json", "Finite"), ("equals_n.json", "EqualsN"), ("discrete_in_n.json", "DiscreteInN")]
    {
        let (code, v, _) = run(&["stable-classify", &data(&format!("stable/{file}"))]);
        assert_eq!(code, 0, "{file}");
        assert_eq!(v["result"]["verdict"], verdict, "{file}");
    }
    let (_, v, _) = run(&["stable-classify", &data("stable/equals_n.json")]);
    assert!(v["result"]["classification"]["bound_squared"].is_string());
    let (code, v, _) = run(&["stable-classify", &data("stable/no_polar_node.json")]);
    assert_eq!(code, 5);
    assert_eq!(v["verdict"], "out of scope");
}

#[test]
fn stable_data_files_match_fixtures() {
    for (file, spec) in [
        ("figure2.json", fixtures::figure2_spec()),
        ("equals_n.json", fixtures::equals_n_spec()),
        ("discrete_in_n.json", fixtures::discrete_in_n_spec()),
    ] {
        let text = std::fs::read_to_string(data(&format!("stable/{file}"))).unwrap();
        let on_disk: Value = serde_json::from_str(&text).unwrap();
        assert_eq!(on_disk, serde_json::to_value(&spec).unwrap(), "{file}");
    }
}

#[test]
fn generated_table_round_trips() {
    let dir = tempfile::tempdir().unwrap();
    let (code, v, _) = run(&["unbounded-generate", "--depth", "2", "--seed", "7"]);
    assert_eq!(code, 0);
    let input = dir.path().join("generated.json");
    std::fs::write(&input, v["result"]["input"].to_string()).unwrap();
    let (code, w, _) = run(&["polygon-analyze", input.to_str().unwrap()]);
    assert_eq!(code, 0);
    assert_eq!(w["result"]["table"]["bounded"], false);
}

#[test]
fn svg_and_both_formats() {
    let (code, _, _) = run(&["diagonals", &data("polygons/square.json"), "--format", "svg"]);
    assert_eq!(code, 0);
    let out = Command::new(env!("CARGO_BIN_EXE_flatveech"))
        .args(["diagonals", &data("polygons/square.json"), "--format", "svg"])
        .output()
        .unwrap();
    let svg = String::from_utf8(out.stdout).unwrap();
    assert!(svg.starts_with("<svg") && svg.contains("<line"));
    let dir = tempfile::tempdir().unwrap();
    let base = dir.path().join("report.json");
    let (code, _, _) = run(&["veech", &data("polygons/irrational_triangle.json"), "--format", "both", "-o", base.to_str().unwrap()]);
    assert_eq!(code, 0);
    assert!(base.exists() && base.with_extension("svg").exists());
}

#[test]
fn no_bare_floats_in_reports() {
    fn check(v: &Value) {
        match v {
            Value::Number(n) => assert!(n.is_i64() || n.is_u64(), "bare float {n}"),
            Value::Array(a) => a.iter().for_each(check),
            Value::Object(o) => o.values().for_each(check),
            _ => {}
        }
    }
    for args in [
        vec!["stable-classify", "stable/figure2.json"],
        vec!["polygon-analyze", "polygons/irrational_triangle.json"],
        vec!["veech", "polygons/irrational_triangle.json"],
    ] {
        let (code, v, _) = run(&[args[0], &data(args[1])]);
        assert_eq!(code, 0);
        check(&v);
    }
}

#[test]
fn precision_from_environment() {
    let out = Command::new(env!("CARGO_BIN_EXE_flatveech"))
        .args(["polygon-analyze", &data("polygons/square.json")])
        .env("FLATVEECH_PRECISION", "128")
        .output()
        .unwrap();
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["config"]["precision_bits"], 128);
}
