use std::process::{Command, Output};

fn rootgap(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_rootgap")).args(args).output().expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

#[test]
fn hermite_two_roots() {
    let out = rootgap(&["roots", "--family", "hermite", "--n", "2"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "family,params,N,i,z_i,gap_i");
    assert_eq!(lines.len(), 3);
    assert!(lines[1].contains(",0.7071067811865476,"));
    assert!(lines[2].contains(",-0.7071067811865476,"));
}

#[test]
fn single_root_oracles() {
    let text = stdout(&rootgap(&["roots", "--family", "laguerre", "--nu", "3", "--n", "1"]));
    assert_eq!(text.lines().nth(1), Some("laguerre,nu=3.0,1,1,3.0,"));
    let text = stdout(&rootgap(&["roots", "--family", "jacobi", "--alpha", "0", "--beta", "0", "--n", "1"]));
    assert_eq!(text.lines().nth(1), Some("jacobi,alpha=0.0;beta=0.0,1,1,0.0,"));
}

#[test]
fn negative_parameters_parse() {
    let out = rootgap(&["roots", "--family", "jacobi", "--alpha", "-0.5", "--beta", "-0.5", "--n", "3"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(stdout(&out).lines().count(), 4);
}

#[test]
fn verify_hermite_passes() {
    let out = rootgap(&["verify", "--family", "hermite", "--n-min", "2", "--n-max", "20"]);
    assert_eq!(out.status.code(), Some(0));
    for line in stdout(&out).lines().skip(1).filter(|l| l.contains("spectral_max_rel_error")) {
        let value: f64 = line.split(',').nth(4).unwrap().parse().unwrap();
        assert!(value <= 1e-8, "{line}");
    }
}

#[test]
fn verify_laguerre_identity() {
    let out = rootgap(&["verify", "--family", "laguerre", "--nu", "1", "--n", "10"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    let line = text.lines().find(|l| l.contains(",laguerre_trace,")).unwrap();
    let value: f64 = line.split(',').nth(4).unwrap().parse().unwrap();
    assert!(value <= 1e-10);
}

#[test]
fn corrupted_matrix_fails_verification() {
    let out = rootgap(&["verify", "--family", "laguerre", "--nu", "1", "--n", "10", "--corrupt-entry"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stdout(&out).contains(",false"));
}

#[test]
fn usage_errors_exit_two() {
    assert_eq!(rootgap(&["roots", "--family", "laguerre", "--nu", "-1", "--n", "2"]).status.code(), Some(2));
    assert_eq!(rootgap(&["roots", "--family", "hermite", "--n", "0"]).status.code(), Some(2));
    assert_eq!(rootgap(&["roots", "--family", "hermite", "--n-min", "5", "--n-max", "3"]).status.code(), Some(2));
    assert_eq!(rootgap(&["roots", "--family", "hermite", "--nu", "1"]).status.code(), Some(2));
    assert_eq!(rootgap(&["roots", "--family", "jacobi", "--alpha", "1,2", "--beta", "1,2,3"]).status.code(), Some(2));
    assert_eq!(rootgap(&["frobnicate"]).status.code(), Some(2));
}

#[test]
fn hermite_two_equality_row() {
    let out = rootgap(&["bounds", "--family", "hermite", "--n", "2"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert!(text.starts_with("family,params,N,bound_id,index,bound_value,observed_value,slack,holds,sharpness\n"));
    let row: Vec<&str> = text.lines().find(|l| l.contains(",hermite_gap,")).unwrap().split(',').collect();
    let slack: f64 = row[7].parse().unwrap();
    assert!(slack.abs() <= 1e-12);
    assert_eq!(row[8], "true");
}

#[test]
fn json_output_is_well_formed() {
    let out =
        rootgap(&["bounds", "--family", "laguerre", "--nu", "0.5", "--n-min", "1", "--n-max", "4", "--format", "json"]);
    assert_eq!(out.status.code(), Some(0));
    let doc: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    let results = doc["results"].as_array().unwrap();
    assert!(!results.is_empty());
    for key in
        ["family", "params", "N", "bound_id", "index", "bound_value", "observed_value", "slack", "holds", "sharpness"]
    {
        assert!(results[0].get(key).is_some(), "{key}");
    }
    assert_eq!(doc["summary"]["violations"], 0);
    assert!(doc["config"]["grid"].is_array());
    // Bounds that need ν >= 1 are reported as not applicable with null numbers.
    let na = results.iter().find(|r| r["status"] == "not_applicable").unwrap();
    assert!(na["bound_value"].is_null());
}

#[test]
fn out_file_matches_stdout_and_is_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bounds.csv");
    let args = ["bounds", "--family", "jacobi", "--alpha", "2", "--beta", "3", "--n-max", "12"];
    let direct = rootgap(&args);
    let mut with_out = args.to_vec();
    with_out.extend(["--out", path.to_str().unwrap()]);
    let filed = rootgap(&with_out);
    assert_eq!(filed.status.code(), Some(0));
    assert!(filed.stdout.is_empty());
    assert_eq!(std::fs::read(&path).unwrap(), direct.stdout);
    assert_eq!(rootgap(&args).stdout, direct.stdout);
}

#[test]
fn default_bound_sweep_has_no_violations() {
    let out = rootgap(&["bounds"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
}

#[test]
fn default_verify_sweep_passes() {
    let out = rootgap(&["verify"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
}
