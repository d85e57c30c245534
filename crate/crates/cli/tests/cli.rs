use std::process::{Command, Output};

fn symcone(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_symcone"))
        .args(args)
        .current_dir(concat!(env!("CARGO_MANIFEST_DIR"), "/../.."))
        .output()
        .expect("run symcone")
}

fn json(out: &Output) -> serde_json::Value {
    serde_json::from_slice(&out.stdout).expect("stdout is a JSON report")
}

fn tmp(name: &str) -> std::path::PathBuf {
    std::env::temp_dir().join(format!("symcone-cli-{}-{name}", std::process::id()))
}

#[test]
fn lists_suites() {
    let out = symcone(&["--list-suites"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    let names: Vec<&str> = text.lines().collect();
    assert_eq!(names.len(), 10);
    assert!(names.contains(&"main-theorem"));
    assert!(names.contains(&"negative-square-cone"));
}

#[test]
fn passing_suite_exits_zero() {
    let out = symcone(&["--model", "sym:2", "--suite", "gauge", "--samples", "50"]);
    assert_eq!(out.status.code(), Some(0));
    let report = json(&out);
    assert_eq!(report["pass"], true);
    assert_eq!(report["model"], "sym:2");
    assert_eq!(report["samples"], 50);
    assert!(report.get("wall_time_ms").is_none());
}

#[test]
fn failing_checks_exit_one() {
    let out = symcone(&[
        "--model",
        "sym:3",
        "--suite",
        "symmetry",
        "--samples",
        "20",
        "--tol",
        "1e-17",
    ]);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(json(&out)["pass"], false);
    assert!(String::from_utf8_lossy(&out.stderr).contains("FAIL "));
}

#[test]
fn usage_errors_exit_two() {
    for args in [
        &["--model", "sym:2", "--suite", "no-such-suite"][..],
        &["--model", "cube:3", "--suite", "gauge"],
        &["--suite", "gauge"],
        &["--model", "orthant:3", "--suite", "negative-square-cone"],
        &["--model", "sym:2", "--suite", "gauge", "--bogus"],
        &["--model", "sym:2", "--suite", "gauge", "--tol", "-1"],
    ] {
        let out = symcone(args);
        assert_eq!(out.status.code(), Some(2), "{args:?}");
        assert!(out.stdout.is_empty(), "{args:?}");
    }
}

#[test]
fn square_cone_from_model_file() {
    let out = symcone(&[
        "--model",
        "poly:square.json",
        "--suite",
        "negative-square-cone",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let report = json(&out);
    assert!(report["verdict"]
        .as_str()
        .unwrap()
        .contains("smoothness_count = 2, 2, 2, 2"));

    let main = json(&symcone(&[
        "--model",
        "poly:square",
        "--suite",
        "main-theorem",
    ]));
    assert!(main["verdict"]
        .as_str()
        .unwrap()
        .starts_with("gauge-reversing map ruled out"));
}

#[test]
fn reports_are_deterministic_and_written_to_file() {
    let path = tmp("report.json");
    let args = [
        "--model",
        "spin:3",
        "--suite",
        "atoms",
        "--seed",
        "9",
        "--samples",
        "30",
    ];
    let first = symcone(&args);
    let second = symcone(&[&args[..], &["--out", path.to_str().unwrap()]].concat());
    assert!(first.status.success() && second.status.success());
    assert!(second.stdout.is_empty());
    assert_eq!(first.stdout, std::fs::read(&path).unwrap());
    let _ = std::fs::remove_file(path);
}

#[test]
fn timing_adds_wall_time() {
    let out = symcone(&[
        "--model",
        "orthant:3",
        "--suite",
        "gauge",
        "--samples",
        "10",
        "--timing",
    ]);
    assert!(json(&out)["wall_time_ms"].is_number());
}

#[test]
fn geodesic_csv() {
    let path = tmp("geodesic.csv");
    let out = symcone(&[
        "--model",
        "sym:2",
        "--csv",
        path.to_str().unwrap(),
        "--x",
        "2,0,1",
        "--y",
        "1,0,2",
        "--points",
        "5",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let text = std::fs::read_to_string(&path).unwrap();
    let _ = std::fs::remove_file(&path);
    let rows: Vec<Vec<f64>> = text
        .lines()
        .skip(1)
        .map(|l| l.split(',').map(|v| v.parse().unwrap()).collect())
        .collect();
    assert_eq!(text.lines().next(), Some("t,x1,x2,x3"));
    assert_eq!(rows.len(), 5);
    // endpoints, and arclength up to d_T = log 2
    assert_eq!(&rows[0][1..], &[2.0, 0.0, 1.0]);
    let last = &rows[4];
    assert!((last[0] - 2f64.ln()).abs() < 1e-9);
    for (a, b) in last[1..].iter().zip([1.0, 0.0, 2.0]) {
        assert!((a - b).abs() < 1e-9);
    }

    let unbalanced = symcone(&[
        "--model",
        "sym:2",
        "--csv",
        "/dev/null",
        "--x",
        "2,0,1",
        "--y",
        "1,0.5,3",
    ]);
    assert_eq!(unbalanced.status.code(), Some(2));
}
