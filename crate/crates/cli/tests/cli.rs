use std::process::Command;

use arlab::{execute, EXIT_HYPOTHESIS, EXIT_INPUT, EXIT_LIMIT, EXIT_OK, EXIT_VIOLATION};
use serde_json::Value;

fn code(args: &[&str]) -> i32 {
    execute(std::iter::once("arlab").chain(args.iter().copied())).code
}

fn report(args: &[&str]) -> Value {
    let out = execute(std::iter::once("arlab").chain(args.iter().copied()));
    assert_eq!(out.code, EXIT_OK, "{:?}", out.message);
    serde_json::from_str(&out.report.expect("report")).expect("json")
}

#[test]
fn exit_codes_by_failure_kind() {
    assert_eq!(
        code(&[
            "genar1", "--h1", "T - 1", "--h2", "T - 1", "--f", "T", "--g", "T^2", "--n", "2",
            "--m", "1"
        ]),
        EXIT_HYPOTHESIS
    );
    assert_eq!(
        code(&[
            "genar1", "--h1", "T - 1", "--h2", "T - 1", "--f", "T", "--g", "y", "--n", "2", "--m",
            "1"
        ]),
        EXIT_INPUT
    );
    assert_eq!(code(&["gcd-sweep", "--f", "T"]), EXIT_INPUT);
    assert_eq!(code(&["no-such-command"]), EXIT_INPUT);
    assert_eq!(
        code(&[
            "gcd-sweep",
            "--f",
            "T",
            "--g",
            "T + 1",
            "--max",
            "6",
            "--bound-override",
            "1"
        ]),
        EXIT_VIOLATION
    );
    assert_eq!(
        code(&[
            "bounds",
            "--theorem",
            "common-zeros",
            "--l",
            "4",
            "--D",
            "4"
        ]),
        EXIT_LIMIT
    );
    assert_eq!(code(&["--help"]), EXIT_OK);
}

#[test]
fn violation_still_writes_the_report() {
    let out = execute([
        "arlab",
        "genar1",
        "--h1",
        "T - 1",
        "--h2",
        "T + 1",
        "--f",
        "T",
        "--g",
        "T + 1",
        "--n",
        "3",
        "--m",
        "3",
        "--bound-override",
        "1",
    ]);
    assert_eq!(out.code, EXIT_VIOLATION);
    let v: Value = serde_json::from_str(&out.report.unwrap()).unwrap();
    assert_eq!(v["summary"]["violations"].as_array().unwrap().len(), 1);
}

#[test]
fn report_envelope() {
    let v = report(&["torsion-zeros", "--f", "T", "--g", "T + 1", "--window", "6"]);
    assert_eq!(v["schema"], 1);
    assert_eq!(v["command"], "torsion-zeros");
    assert_eq!(v["inputs"]["g"], "T + 1");
    assert_eq!(v["summary"]["zeros"], "T^2 + T + 1");
}

#[test]
fn inputs_are_echoed_canonically() {
    let v = report(&["independence", "--polys", "T*T", "(1+T)^1"]);
    assert_eq!(v["inputs"]["polys"], serde_json::json!(["T^2", "T + 1"]));
}

#[test]
fn single_flags_accept_leading_minus() {
    let v = report(&[
        "torsion-zeros",
        "--f",
        "-T",
        "--g",
        "T + 1",
        "--window",
        "6",
    ]);
    assert_eq!(v["inputs"]["f"], "-T");
}

#[test]
fn sunit_sweep_and_single_tuple_agree() {
    let fam = [
        "--fs", "T", "--phis", "T + 2", "--gs", "T + 1", "--psis", "T - 1",
    ];
    let one: Vec<&str> = ["sunit-gcd"]
        .iter()
        .chain(&fam)
        .chain(&["--exps", "1", "1", "1", "1"])
        .copied()
        .collect();
    let v = report(&one);
    assert_eq!(v["records"][0]["gcd"], "1");
    let grid: Vec<&str> = ["sunit-gcd"]
        .iter()
        .chain(&fam)
        .chain(&["--max", "2"])
        .copied()
        .collect();
    let s = report(&grid);
    assert!(!s["records"].as_array().unwrap().is_empty());
}

#[test]
fn kronecker_backward_inverts_forward() {
    let f = report(&["kronecker", "--poly", "X1*X2 + X2^2", "--d", "3"]);
    let image = f["summary"]["image"].as_str().unwrap().to_owned();
    let b = report(&["kronecker", "--poly", &image, "--d", "3", "--backward"]);
    assert_eq!(b["summary"]["image"], "X1*X2 + X2^2");
}

#[test]
fn csv_has_header_and_rows() {
    let out = execute(["arlab", "mason", "--samples", "3", "--format", "csv"]);
    assert_eq!(out.code, EXIT_OK);
    let text = out.report.unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert!(lines[0].contains("radical_degree"));
    assert_eq!(lines.len(), 4);
}

#[test]
fn bounds_list_names_every_formula() {
    let v = report(&["bounds", "--list"]);
    let names: Vec<&str> = v["records"]
        .as_array()
        .unwrap()
        .iter()
        .map(|r| r["name"].as_str().unwrap())
        .collect();
    assert!(names.contains(&"genar1") && names.contains(&"n-bound"));
}

#[test]
fn binary_writes_output_file_and_exit_code() {
    let dir = std::env::temp_dir().join(format!("arlab-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("sweep.json");
    let status = Command::new(env!("CARGO_BIN_EXE_arlab"))
        .args([
            "gcd-sweep",
            "--f",
            "T",
            "--g",
            "T + 1",
            "--max",
            "6",
            "--bound-override",
            "1",
            "-o",
        ])
        .arg(&path)
        .status()
        .unwrap();
    assert_eq!(status.code(), Some(EXIT_VIOLATION));
    let v: Value = serde_json::from_slice(&std::fs::read(&path).unwrap()).unwrap();
    assert_eq!(v["summary"]["stable_divisor"], "T^2 + T + 1");
    std::fs::remove_dir_all(&dir).ok();
}

#[test]
fn worker_count_does_not_change_reports() {
    let run = |workers: &str| {
        Command::new(env!("CARGO_BIN_EXE_arlab"))
            .args([
                "gcd-sweep",
                "--f",
                "T",
                "--g",
                "T + 1",
                "--max",
                "10",
                "--workers",
                workers,
            ])
            .env_remove("ARLAB_WORKERS")
            .output()
            .unwrap()
            .stdout
    };
    assert_eq!(run("1"), run("3"));
}

#[test]
fn env_workers_must_be_positive() {
    let out = Command::new(env!("CARGO_BIN_EXE_arlab"))
        .args(["bounds", "--list"])
        .env("ARLAB_WORKERS", "0")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(EXIT_INPUT));
}
