use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_clustertube")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).expect("utf8")
}

#[test]
fn atlas_of_rank_two_has_six_variables() {
    let o = run(&["atlas", "--n", "2", "--format", "json"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["variables"].as_array().unwrap().len(), 6);
    assert_eq!(v["seeds"].as_array().unwrap().len(), 6);
}

#[test]
fn b_matrix_is_sign_skew_symmetric() {
    let o = run(&["b-matrix", "--n", "3", "--object", "(1,3),(1,2),(1,1)", "--format", "json"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    let b: Vec<Vec<i64>> = serde_json::from_value(v["b"].clone()).unwrap();
    assert_eq!(b.len(), 3);
    for i in 0..3 {
        assert_eq!(b[i][i], 0);
        for j in 0..3 {
            assert_eq!(b[i][j].signum(), -b[j][i].signum());
        }
    }
}

#[test]
fn reproduce_example_succeeds_and_lists_nine_values() {
    let o = run(&["reproduce-example"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    let text = stdout(&o);
    assert!(text.contains("(x1^2+2*x1*x2+x2^2+x3^2)/(x1*x3^2)"));
    assert_eq!(text.lines().filter(|l| l.trim_end().ends_with(" ok")).count(), 9);
}

#[test]
fn bad_flags_are_usage_errors() {
    assert_eq!(run(&["atlas"]).status.code(), Some(2));
    assert_eq!(run(&["atlas", "--n", "1"]).status.code(), Some(2));
    assert_eq!(run(&["atlas", "--n", "2", "--cap", "0"]).status.code(), Some(2));
    assert_eq!(run(&["verify", "--n", "2", "--oracle", "maybe"]).status.code(), Some(2));
    assert_eq!(run(&["b-matrix", "--n", "3", "--object", "(1,2)"]).status.code(), Some(2));
    assert_eq!(run(&["frobnicate"]).status.code(), Some(2));
}

#[test]
fn too_small_cap_is_reported() {
    let o = run(&["atlas", "--n", "3", "--cap", "2"]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn verify_passes_at_rank_three() {
    let o = run(&["verify", "--n", "2", "--oracle", "on"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    assert!(stdout(&o).contains("all suites passed"));
}

#[test]
fn output_is_deterministic() {
    for args in [
        vec!["cc-table", "--n", "3", "--format", "json"],
        vec!["enumerate-rigid", "--n", "3"],
        vec!["atlas", "--n", "3", "--format", "json"],
    ] {
        assert_eq!(run(&args).stdout, run(&args).stdout, "{args:?}");
    }
}

#[test]
fn out_flag_writes_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("b.json");
    let p = path.to_str().unwrap();
    let o = run(&["b-matrix", "--n", "2", "--format", "json", "--out", p]);
    assert_eq!(o.status.code(), Some(0));
    assert!(o.stdout.is_empty());
    let v: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(v["b"].as_array().unwrap().len(), 2);
}
