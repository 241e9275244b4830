use std::path::Path;
use std::process::{Command, Output};

use rotbent::RotSymSpec;
use serde_json::Value;

fn rotbent(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_rotbent"))
        .args(args)
        .env_remove("ROTBENT_BUDGET")
        .output()
        .expect("binary runs")
}

fn json(args: &[&str]) -> Value {
    let mut full = args.to_vec();
    full.extend(["--format", "json"]);
    let out = rotbent(&full);
    assert!(
        out.status.success(),
        "{args:?}: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    serde_json::from_slice(&out.stdout).expect("valid JSON")
}

fn schema() -> jsonschema::Validator {
    let path = Path::new(env!("CARGO_MANIFEST_DIR")).join("../../schema/rotbent.schema.json");
    let schema: Value = serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap();
    jsonschema::validator_for(&schema).expect("schema compiles")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

#[test]
fn analyze_f0_n6() {
    let v = json(&["analyze", "-n", "6", "x0x3"]);
    assert_eq!(v["bent"], true);
    assert_eq!(v["nonlinearity"], 28);
    assert_eq!(v["weight"], 28);
    assert_eq!(v["sign_corners"], serde_json::json!([1, -1]));
    assert_eq!(v["corner"]["reduced"], 0);
    let text = stdout(&rotbent(&["analyze", "-n", "6", "x0x3"]));
    assert!(text.contains("bent              true"), "{text}");
}

#[test]
fn analyze_adjacent_quadratic_n6() {
    let v = json(&["analyze", "-n", "6", "x0x1"]);
    assert_eq!(v["bent"], false);
    assert_eq!(v["corner"]["folded"], 64);
    assert_eq!(v["corner"]["reduced"], 64);
}

#[test]
fn analyze_affine_n4() {
    let v = json(&["analyze", "-n", "4", "1+x0"]);
    assert_eq!(v["affine"], true);
    assert_eq!(v["nonlinearity"], 0);
}

#[test]
fn analyze_reports_jset_bound_when_it_applies() {
    let v = json(&["analyze", "-n", "8", "x0x1"]);
    assert_eq!(v["jset"], Value::Null);
    let v = json(&["analyze", "-n", "4", "x0x2"]);
    assert_eq!(v["jset"], Value::Null);
    let v = json(&["analyze", "-n", "6", "x0"]);
    assert_eq!(v["jset"]["j"], serde_json::json!([2, 3, 4, 5]));
    assert_eq!(v["jset"]["bound"], 32 - 8);
}

#[test]
fn orbit_counts() {
    assert_eq!(json(&["orbits", "-n", "4", "--count-only"])["total"], 6);
    assert_eq!(json(&["orbits", "-n", "2"])["total"], 3);
    let v = json(&["orbits", "-n", "6"]);
    let size_two: Vec<&Value> = v["orbits"]
        .as_array()
        .unwrap()
        .iter()
        .filter(|o| o["size"] == 2)
        .collect();
    assert_eq!(size_two.len(), 1);
    assert_eq!(size_two[0]["representative"], 21);
    assert!(stdout(&rotbent(&["orbits", "-n", "4", "--count-only"])).contains("6 orbits"));
}

#[test]
fn orbit_listing_is_limited() {
    assert_eq!(rotbent(&["orbits", "-n", "20"]).status.code(), Some(2));
    let v = json(&["orbits", "-n", "20", "--count-only"]);
    assert_eq!(v["orbits"], Value::Null);
    assert_eq!(v["total"], 52488);
}

#[test]
fn verify_exit_codes() {
    assert_eq!(
        rotbent(&["verify", "-n", "6", "--suite", "all"])
            .status
            .code(),
        Some(0)
    );
    assert_eq!(
        rotbent(&["verify", "-n", "8", "--suite", "sec2"])
            .status
            .code(),
        Some(0)
    );
    assert_eq!(rotbent(&["verify", "-n", "7"]).status.code(), Some(2));
    assert_eq!(
        rotbent(&["verify", "-n", "8", "--suite", "sec3"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(
        rotbent(&["verify", "-n", "6", "--suite", "sec9"])
            .status
            .code(),
        Some(2)
    );
}

#[test]
fn usage_errors_exit_2() {
    assert_eq!(rotbent(&[]).status.code(), Some(2));
    assert_eq!(rotbent(&["analyze", "x0x1"]).status.code(), Some(2));
    assert_eq!(
        rotbent(&["analyze", "-n", "6", "x0x9"]).status.code(),
        Some(2)
    );
    assert_eq!(
        rotbent(&["analyze", "-n", "6", "x0x1+x1x2"]).status.code(),
        Some(2)
    );
    assert_eq!(
        rotbent(&["expand", "-n", "4", "x0", "--format", "csv"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(rotbent(&["search", "-n", "6"]).status.code(), Some(2));
}

#[test]
fn budget_comes_from_flag_or_environment() {
    let args = ["search", "-n", "10", "--kind", "degree2"];
    let mut tight = args.to_vec();
    tight.extend(["--budget", "4"]);
    assert_eq!(rotbent(&tight).status.code(), Some(2));
    let out = Command::new(env!("CARGO_BIN_EXE_rotbent"))
        .args(args)
        .env("ROTBENT_BUDGET", "4")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
    assert!(rotbent(&args).status.success());
}

#[test]
fn sampled_verify_is_reproducible() {
    let args = [
        "verify",
        "-n",
        "10",
        "--suite",
        "sec3",
        "--samples",
        "500",
        "--seed",
        "9",
    ];
    let strip = |mut v: Value| {
        for e in v["entries"].as_array_mut().unwrap() {
            e["elapsed_ms"] = 0.into();
        }
        v
    };
    let a = strip(json(&args));
    let b = strip(json(&args));
    assert_eq!(a, b);
    assert_eq!(a["seed"], 9);
    assert_eq!(a["passed"], true);
}

#[test]
fn report_written_to_out_path() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("report.json");
    let out = rotbent(&[
        "verify",
        "-n",
        "6",
        "--format",
        "json",
        "--out",
        path.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    assert!(out.stdout.is_empty());
    let v: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(v["passed"], true);
    assert!(schema().is_valid(&v));
}

#[test]
fn census_csv_header_and_rows() {
    let out = rotbent(&["census", "-n", "6", "--format", "csv"]);
    assert!(out.status.success());
    let text = stdout(&out);
    let mut reader = csv::Reader::from_reader(text.as_bytes());
    let header: Vec<String> = reader.headers().unwrap().iter().map(String::from).collect();
    assert_eq!(
        header,
        [
            "spec",
            "degree",
            "cycle_kind",
            "monomials",
            "nonlinearity",
            "bent"
        ]
    );
    let rows: Vec<csv::StringRecord> = reader.records().map(Result::unwrap).collect();
    assert_eq!(rows.len(), 13);
    let bent: Vec<&str> = rows
        .iter()
        .filter(|r| &r[5] == "true")
        .map(|r| &r[0])
        .collect();
    assert_eq!(bent, ["x0x3"]);
}

#[test]
fn census_brute_force_n4() {
    let v = json(&["census", "-n", "4", "--brute-force"]);
    assert_eq!(v["brute_force"]["bent"], 896);
    assert_eq!(
        rotbent(&["census", "-n", "6", "--brute-force"])
            .status
            .code(),
        Some(2)
    );
}

#[test]
fn every_subcommand_matches_schema() {
    let validator = schema();
    let runs: [&[&str]; 9] = [
        &["analyze", "-n", "6", "x0x3"],
        &["analyze", "-n", "10", "1+x0x1x2+x0x5"],
        &["orbits", "-n", "6"],
        &["orbits", "-n", "12", "--count-only"],
        &["expand", "-n", "6", "0"],
        &[
            "search",
            "-n",
            "6",
            "--kind",
            "homogeneous",
            "--degree",
            "2",
        ],
        &["search", "-n", "8", "--kind", "short-cycle"],
        &["verify", "-n", "6", "--suite", "sec4"],
        &["census", "-n", "4", "--brute-force"],
    ];
    for args in runs {
        let v = json(args);
        let errors: Vec<String> = validator.iter_errors(&v).map(|e| e.to_string()).collect();
        assert!(errors.is_empty(), "{args:?}: {errors:?}");
    }
    // A wrong shape is rejected.
    let mut bad = json(&["orbits", "-n", "4"]);
    bad["command"] = "analyze".into();
    assert!(!validator.is_valid(&bad));
}

#[test]
fn printed_specs_reparse() {
    for (n, kind) in [(6, "degree2"), (8, "short-cycle"), (6, "short-cycle")] {
        let v = json(&["search", "-n", &n.to_string(), "--kind", kind]);
        for s in v["bent"].as_array().unwrap() {
            let s = s.as_str().unwrap();
            let spec = RotSymSpec::parse(n, s).unwrap();
            assert_eq!(spec.to_string(), s);
        }
    }
    for input in ["x3x0", " x1x4 + 1 ", "x0x2x4+x0x1", "0,3"] {
        let printed = json(&["expand", "-n", "6", input])["spec"]
            .as_str()
            .unwrap()
            .to_string();
        let reparsed = json(&["expand", "-n", "6", &printed])["spec"].clone();
        assert_eq!(reparsed, printed.as_str());
        assert_eq!(
            RotSymSpec::parse(6, &printed).unwrap(),
            RotSymSpec::parse(6, input).unwrap()
        );
    }
}
