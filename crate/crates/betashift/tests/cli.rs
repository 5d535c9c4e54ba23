//! End-to-end tests of the command-line binary: payload schemas, exit codes,
//! and determinism across runs.

use std::process::{Command, Output};

fn betashift(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_betashift"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

const GOLDEN: &str = r#"{"type":"exact","period":[1,0]}"#;

#[test]
fn followers_csv_range() {
    let out = betashift(&["followers", "--kneading", GOLDEN, "--n", "1..10", "--format", "csv"]);
    assert!(out.status.success());
    let text = stdout(&out);
    let rows: Vec<&str> = text.trim().lines().collect();
    assert_eq!(rows.len(), 10);
    for (i, row) in rows.iter().enumerate() {
        assert_eq!(*row, format!("{},2,exact", i + 1));
    }
}

#[test]
fn construct_feeds_back_into_counting() {
    let dir = std::env::temp_dir().join("betashift-cli-test");
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("ctilde.json");
    let out = betashift(&["construct", "champernowne_tilde(5)"]);
    assert!(out.status.success());
    std::fs::write(&path, stdout(&out)).unwrap();
    let out = betashift(&[
        "predecessors",
        "--kneading",
        path.to_str().unwrap(),
        "--n",
        "1..4",
        "--format",
        "csv",
    ]);
    assert!(out.status.success());
    let text = stdout(&out);
    let rows: Vec<&str> = text.trim().lines().collect();
    assert_eq!(
        rows,
        vec![
            "1,3,lower_bound",
            "2,5,lower_bound",
            "3,9,lower_bound",
            "4,17,lower_bound"
        ]
    );
}

#[test]
fn oracle_even_shift_single_json() {
    let out = betashift(&[
        "oracle",
        "--predicate",
        "even_shift",
        "--kind",
        "follower",
        "--n",
        "2",
        "--depth",
        "6",
    ]);
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["value"], 3);
    assert_eq!(v["provenance"], "oracle");
    assert_eq!(v["params"]["depth"], 6);
}

#[test]
fn solve_beta_and_expand() {
    let out = betashift(&["solve-beta", "--kneading", GOLDEN, "--tolerance", "1e-9"]);
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    let lo: f64 = v["lo"].as_str().unwrap().parse().unwrap();
    let hi: f64 = v["hi"].as_str().unwrap().parse().unwrap();
    assert!(lo <= 1.6180339888 && hi >= 1.6180339887);

    let out = betashift(&["expand", "--beta", "1.8", "--count", "4"]);
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["digits"], serde_json::json!([1, 1, 0, 1]));
}

#[test]
fn kneading_round_trip_through_cli() {
    let out = betashift(&["kneading", "--beta", "1.5", "--horizon", "12"]);
    assert!(out.status.success());
    let d = stdout(&out);
    let out = betashift(&["validate", "--kneading", d.trim()]);
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["valid"], true);
}

#[test]
fn admissibility_queries() {
    let out = betashift(&["admissible", "--kneading", GOLDEN, "--word", "010"]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["admissible"], true);
    let out = betashift(&["admissible", "--kneading", GOLDEN, "--word", "11"]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["admissible"], false);
}

#[test]
fn language_listing() {
    let out = betashift(&["language", "--kneading", GOLDEN, "--n", "2", "--format", "csv"]);
    assert_eq!(stdout(&out).trim().lines().collect::<Vec<_>>(), vec!["00", "01", "10"]);
}

#[test]
fn check_oracle_passes_for_exact_formulas() {
    let out = betashift(&[
        "followers",
        "--kneading",
        GOLDEN,
        "--n",
        "1..5",
        "--check-oracle",
        "--depth",
        "5",
    ]);
    assert!(out.status.success());
}

#[test]
fn exit_codes() {
    // invalid input -> 2
    let out = betashift(&["followers", "--kneading", "{not json", "--n", "1..3"]);
    assert_eq!(out.status.code(), Some(2));
    // horizon exceeded -> 3
    let short = r#"{"type":"prefix","digits":[1,1,0,1]}"#;
    let out = betashift(&["followers", "--kneading", short, "--n", "4"]);
    assert_eq!(out.status.code(), Some(3));
    // work budget exceeded -> 3
    let out = betashift(&[
        "oracle",
        "--predicate",
        "full(2)",
        "--kind",
        "extender",
        "--n",
        "4",
        "--depth",
        "5",
        "--work-budget",
        "1000",
    ]);
    assert_eq!(out.status.code(), Some(3));
    // unknown flag -> 2
    let out = betashift(&["followers", "--mystery-flag"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn output_is_deterministic() {
    let run = || {
        stdout(&betashift(&[
            "extenders",
            "--kneading",
            GOLDEN,
            "--n",
            "1..4",
            "--format",
            "csv",
        ]))
    };
    let first = run();
    for _ in 0..3 {
        assert_eq!(run(), first);
    }
}
