use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn bvjunta(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_bvjunta"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn report(args: &[&str]) -> Value {
    let out = bvjunta(args);
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    serde_json::from_str(&stdout(&out)).unwrap()
}

fn without_timestamps(mut v: Value) -> String {
    v.as_object_mut().unwrap().remove("timestamps");
    serde_json::to_string(&v).unwrap()
}

fn schema() -> jsonschema::Validator {
    let path = Path::new(env!("CARGO_MANIFEST_DIR")).join("schema/report.schema.json");
    let schema: Value = serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap();
    jsonschema::validator_for(&schema).unwrap()
}

#[test]
fn spectrum_csv_rows() {
    let out = bvjunta(&["spectrum", "--anf", "x1*x2", "--n", "2"]);
    assert!(out.status.success());
    assert_eq!(
        stdout(&out),
        "y,c_y,p_y\n00,0.5,0.25\n01,0.5,0.25\n10,0.5,0.25\n11,-0.5,0.25\n"
    );
}

#[test]
fn spectrum_json_and_out_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("s.json");
    let out = bvjunta(&[
        "spectrum",
        "--anf",
        "x1+x3",
        "--n",
        "4",
        "--format",
        "json",
        "--out",
        path.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    assert!(out.stdout.is_empty());
    let v: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(v["parseval_sum"], 1.0);
    let rows = v["rows"].as_array().unwrap();
    assert_eq!(rows.len(), 16);
    assert_eq!(rows[0b1010]["y"], "1010");
    assert_eq!(rows[0b1010]["c_y"], 1.0);
}

#[test]
fn table_file_input() {
    let dir = tempfile::tempdir().unwrap();
    let good = dir.path().join("f.tt");
    std::fs::write(&good, "n=2\n0001\n").unwrap();
    let out = bvjunta(&["spectrum", "--table", good.to_str().unwrap()]);
    assert!(out.status.success());
    assert!(stdout(&out).ends_with("11,-0.5,0.25\n"));

    let bad = dir.path().join("bad.tt");
    std::fs::write(&bad, "n=2\n00x1\n").unwrap();
    let out = bvjunta(&["spectrum", "--table", bad.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("malformed truth table"));
}

#[test]
fn usage_errors_exit_one() {
    assert_eq!(
        bvjunta(&["bv", "--anf", "x1*x2", "--n", "2", "--trials", "0"])
            .status
            .code(),
        Some(1)
    );
    assert_eq!(
        bvjunta(&["spectrum", "--anf", "x1 +", "--n", "2"])
            .status
            .code(),
        Some(1)
    );
    assert_eq!(
        bvjunta(&["spectrum", "--anf", "x5", "--n", "4"])
            .status
            .code(),
        Some(1)
    );
    assert_eq!(bvjunta(&["frobnicate"]).status.code(), Some(1));
    assert_eq!(bvjunta(&["--help"]).status.code(), Some(0));
}

#[test]
fn unamplifiable_exits_two_with_structured_error() {
    let out = bvjunta(&[
        "amplify", "--anf", "x1+x2", "--n", "4", "--k", "3", "--auto", "--trials", "10",
    ]);
    assert_eq!(out.status.code(), Some(2));
    let v: Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["error"]["kind"], "unamplifiable");
}

#[test]
fn large_n_guard() {
    let out = bvjunta(&["spectrum", "--anf", "x1", "--n", "21"]);
    assert_eq!(out.status.code(), Some(2));
    let out = bvjunta(&["spectrum", "--anf", "x1", "--n", "25", "--force-large"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn bv_report_frequency_and_schema() {
    let v = report(&[
        "bv", "--anf", "x1*x2", "--n", "6", "--trials", "100000", "--seed", "7",
    ]);
    schema().validate(&v).unwrap();
    let freq = v["results"]["learn_at_least_one_frequency"]
        .as_f64()
        .unwrap();
    assert!((freq - 0.75).abs() < 0.01, "{freq}");
    assert_eq!(v["predictions"]["learn_at_least_one_probability"], 0.75);
    assert_eq!(v["results"]["query_count"], 100000);
    assert_eq!(v["results"]["union_learned"], serde_json::json!([1, 2]));
}

#[test]
fn amplify_two_product_always_finds_both() {
    let v = report(&[
        "amplify", "--anf", "x1*x2", "--n", "4", "--k", "2", "--auto", "--trials", "1000",
        "--seed", "1",
    ]);
    schema().validate(&v).unwrap();
    assert_eq!(v["results"]["iterations"], 1);
    assert_eq!(v["results"]["trials_covering_support"], 1000);
    assert_eq!(v["results"]["success_frequency"], 1.0);
    assert_eq!(v["results"]["queries_per_trial"], 3);
    let p = v["predictions"]["predicted_success"].as_f64().unwrap();
    assert!((p - 1.0).abs() < 1e-12);
    let curve = v["predictions"]["curve"].as_array().unwrap();
    assert_eq!(curve.len(), 2);
}

#[test]
fn amplify_with_gamma_estimate_validates() {
    let v = report(&[
        "amplify",
        "--anf",
        "x1*x2*x3 + x4",
        "--n",
        "6",
        "--k",
        "3",
        "--iterations",
        "2",
        "--trials",
        "200",
        "--estimate-gamma",
        "5000",
    ]);
    schema().validate(&v).unwrap();
    assert_eq!(v["predictions"]["gamma_estimate"]["queries"], 5000);
}

#[test]
fn zero_iterations_match_bv() {
    let a = report(&[
        "amplify",
        "--anf",
        "x1*x2 + x3",
        "--n",
        "4",
        "--k",
        "2",
        "--iterations",
        "0",
        "--trials",
        "5000",
        "--seed",
        "3",
    ]);
    let b = report(&[
        "bv",
        "--anf",
        "x1*x2 + x3",
        "--n",
        "4",
        "--trials",
        "5000",
        "--seed",
        "3",
    ]);
    assert_eq!(
        a["results"]["outcome_histogram"],
        b["results"]["outcome_histogram"]
    );
}

#[test]
fn reports_are_reproducible() {
    for args in [
        &[
            "bv",
            "--anf",
            "x1*x2*x3 + x2*x5",
            "--n",
            "8",
            "--trials",
            "20000",
            "--seed",
            "11",
        ][..],
        &[
            "amplify", "--anf", "x1*x2*x3", "--n", "8", "--k", "3", "--auto", "--trials", "3000",
            "--seed", "11",
        ][..],
    ] {
        let a = without_timestamps(report(args));
        let b = without_timestamps(report(args));
        assert_eq!(a, b);
    }
}

#[test]
fn thread_count_does_not_change_results() {
    let args = [
        "bv",
        "--anf",
        "x1*x2 + x3*x4*x5",
        "--n",
        "7",
        "--trials",
        "30000",
        "--seed",
        "5",
    ];
    let one = Command::new(env!("CARGO_BIN_EXE_bvjunta"))
        .args(args)
        .env("BVJUNTA_THREADS", "1")
        .output()
        .unwrap();
    let many = Command::new(env!("CARGO_BIN_EXE_bvjunta"))
        .args(args)
        .env("BVJUNTA_THREADS", "4")
        .output()
        .unwrap();
    let a: Value = serde_json::from_slice(&one.stdout).unwrap();
    let b: Value = serde_json::from_slice(&many.stdout).unwrap();
    assert_eq!(a["results"], b["results"]);
}

#[test]
fn predict_table() {
    let out = bvjunta(&["predict", "--m-min", "2", "--m-max", "3"]);
    let text = stdout(&out);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines.len(), 3);
    assert!(lines[1].starts_with("2,0.5,0.5,0.25,0.25,3,"));

    let v = report(&[
        "predict", "--m-min", "30", "--m-max", "30", "--format", "json",
    ]);
    assert_eq!(v["limits"]["fail_all_converged"], true);
    assert_eq!(v["rows"][0]["m"], 30);

    let empty = bvjunta(&["predict", "--m-min", "3", "--m-max", "2"]);
    assert_eq!(stdout(&empty).lines().count(), 1);
}

#[test]
fn amplify_csv_dumps_statevector() {
    let out = bvjunta(&[
        "amplify", "--anf", "x1*x2", "--n", "3", "--k", "2", "--auto", "--trials", "1", "--format",
        "csv",
    ]);
    let text = stdout(&out);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "y,amplitude,probability,popcount");
    assert_eq!(lines.len(), 9);
    let mass: f64 = lines[1..]
        .iter()
        .map(|l| l.split(',').collect::<Vec<_>>())
        .filter(|c| c[3].parse::<u32>().unwrap() >= 2)
        .map(|c| c[2].parse::<f64>().unwrap())
        .sum();
    assert!((mass - 1.0).abs() < 1e-10);
}
