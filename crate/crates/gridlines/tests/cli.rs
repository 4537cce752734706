//! End-to-end tests of the command-line surface: output bytes, schemas,
//! exit codes, and determinism.

use std::process::{Command, Output};

fn gridlines(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_gridlines"))
        .args(args)
        .output()
        .expect("spawn gridlines")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).expect("utf-8 stdout")
}

fn exit_code(out: &Output) -> i32 {
    out.status.code().expect("exit code")
}

#[test]
fn compute_lgeq_explicit() {
    let out = gridlines(&[
        "compute",
        "--quantity",
        "lgeq",
        "--q",
        "2",
        "--dims",
        "3x3",
        "--method",
        "explicit",
    ]);
    assert_eq!(exit_code(&out), 0);
    assert_eq!(stdout(&out), "20\n");
}

#[test]
fn compute_fq_default_method() {
    let out = gridlines(&["compute", "--quantity", "fq", "--q", "1", "--dims", "2x2"]);
    assert_eq!(exit_code(&out), 0);
    assert_eq!(stdout(&out), "12\n");
}

#[test]
fn compute_threshold_oracle() {
    let out = gridlines(&[
        "compute",
        "--quantity",
        "threshold",
        "--dims",
        "2x2",
        "--method",
        "oracle",
    ]);
    assert_eq!(exit_code(&out), 0);
    assert_eq!(stdout(&out), "14\n");
}

#[test]
fn compute_method_all_agrees() {
    let out = gridlines(&[
        "compute",
        "--quantity",
        "lexact",
        "--q",
        "3",
        "--dims",
        "4x4",
        "--method",
        "all",
    ]);
    assert_eq!(exit_code(&out), 0);
    assert_eq!(stdout(&out), "4\n");
}

#[test]
fn compute_3d_oracle_matches_explicit() {
    for method in ["explicit", "oracle"] {
        let out = gridlines(&[
            "compute",
            "--quantity",
            "cq",
            "--q",
            "2",
            "--dims",
            "2x2x2",
            "--method",
            method,
        ]);
        assert_eq!(exit_code(&out), 0);
        assert_eq!(stdout(&out), "28\n", "method {method}");
    }
}

#[test]
fn table_coupled_csv_bytes() {
    let out = gridlines(&[
        "table",
        "--quantity",
        "lgeq",
        "--q",
        "2",
        "--n",
        "1..4",
        "--method",
        "coupled",
        "--format",
        "csv",
    ]);
    assert_eq!(exit_code(&out), 0);
    assert_eq!(
        stdout(&out),
        "quantity,q,dims,n,method,value\n\
         lgeq,2,1x1,1,coupled,0\n\
         lgeq,2,2x2,2,coupled,6\n\
         lgeq,2,3x3,3,coupled,20\n\
         lgeq,2,4x4,4,coupled,62\n"
    );
}

#[test]
fn table_single_json() {
    let out = gridlines(&[
        "table",
        "--quantity",
        "cq",
        "--q",
        "2",
        "--n",
        "1..3",
        "--method",
        "single",
        "--format",
        "json",
    ]);
    assert_eq!(exit_code(&out), 0);
    let doc: serde_json::Value = serde_json::from_str(&stdout(&out)).expect("valid json");
    assert_eq!(doc["schema"], "gridlines/1");
    let rows = doc["rows"].as_array().expect("rows array");
    assert_eq!(rows.len(), 3);
    let values: Vec<&str> = rows.iter().map(|r| r["value"].as_str().unwrap()).collect();
    assert_eq!(values, ["0", "6", "28"]);
    assert_eq!(rows[1]["dims"], "2x2");
    assert_eq!(rows[1]["n"], 2);
    assert_eq!(rows[1]["method"], "single");
    assert_eq!(rows[1]["quantity"], "cq");
}

#[test]
fn table_default_method_initial_values() {
    let out = gridlines(&["table", "--quantity", "fq", "--q", "3", "--n", "1..3"]);
    assert_eq!(exit_code(&out), 0);
    let body = stdout(&out);
    let values: Vec<&str> = body
        .lines()
        .skip(1)
        .map(|l| l.rsplit(',').next().unwrap())
        .collect();
    assert_eq!(values, ["0", "0", "0"]);
}

#[test]
fn table_dims_list_explicit() {
    let out = gridlines(&[
        "table",
        "--quantity",
        "fq",
        "--q",
        "1",
        "--dims",
        "4x4,2x3",
        "--method",
        "explicit",
    ]);
    assert_eq!(exit_code(&out), 0);
    assert_eq!(
        stdout(&out),
        "quantity,q,dims,n,method,value\n\
         fq,1,2x3,3,explicit,26\n\
         fq,1,4x4,4,explicit,172\n"
    );
}

#[test]
fn table_method_all_rows_agree() {
    let out = gridlines(&[
        "table",
        "--quantity",
        "lgeq",
        "--q",
        "2",
        "--n",
        "1..5",
        "--method",
        "all",
    ]);
    assert_eq!(exit_code(&out), 0);
    let body = stdout(&out);
    // 5 values of n, 4 methods each.
    assert_eq!(body.lines().count(), 21);
    for n in ["explicit", "coupled", "single", "oracle"] {
        assert!(body.contains(&format!(",{n},")), "missing method {n}");
    }
}

#[test]
fn threshold_table_needs_n_from_two() {
    let out = gridlines(&["table", "--quantity", "threshold", "--n", "1..4"]);
    assert_eq!(exit_code(&out), 2);

    let out = gridlines(&["table", "--quantity", "threshold", "--n", "2..4"]);
    assert_eq!(exit_code(&out), 0);
    let body = stdout(&out);
    let values: Vec<&str> = body
        .lines()
        .skip(1)
        .map(|l| l.rsplit(',').next().unwrap())
        .collect();
    assert_eq!(values, ["14", "58", "174"]);
}

#[test]
fn usage_errors_exit_2() {
    // Missing q for a q-indexed quantity.
    let out = gridlines(&["compute", "--quantity", "cq", "--dims", "3x3"]);
    assert_eq!(exit_code(&out), 2);
    // q below the quantity's domain.
    let out = gridlines(&["compute", "--quantity", "lgeq", "--q", "1", "--dims", "3x3"]);
    assert_eq!(exit_code(&out), 2);
    // Malformed dims.
    let out = gridlines(&["compute", "--quantity", "fq", "--q", "1", "--dims", "3x"]);
    assert_eq!(exit_code(&out), 2);
    // One-dimensional grid.
    let out = gridlines(&["compute", "--quantity", "fq", "--q", "1", "--dims", "7"]);
    assert_eq!(exit_code(&out), 2);
    // Unknown flag (clap).
    let out = gridlines(&["compute", "--bogus"]);
    assert_eq!(exit_code(&out), 2);
    // Recurrence method on a non-square grid.
    let out = gridlines(&[
        "compute",
        "--quantity",
        "fq",
        "--q",
        "1",
        "--dims",
        "2x3",
        "--method",
        "coupled",
    ]);
    assert_eq!(exit_code(&out), 2);
    // Threshold on a 3-D grid.
    let out = gridlines(&["compute", "--quantity", "threshold", "--dims", "2x2x2"]);
    assert_eq!(exit_code(&out), 2);
}

#[test]
fn resource_cap_exits_3() {
    let out = gridlines(&[
        "compute",
        "--quantity",
        "cq",
        "--q",
        "2",
        "--dims",
        "200x200",
        "--method",
        "oracle",
        "--pair-cap",
        "100",
    ]);
    assert_eq!(exit_code(&out), 3);
    let err = String::from_utf8(out.stderr).unwrap();
    assert!(err.contains("100"), "cap missing from: {err}");

    let out = gridlines(&[
        "compute",
        "--quantity",
        "threshold",
        "--dims",
        "5x5",
        "--method",
        "oracle",
    ]);
    assert_eq!(exit_code(&out), 3);
}

#[test]
fn verify_default_passes() {
    let out = gridlines(&["verify"]);
    assert_eq!(exit_code(&out), 0);
    let body = stdout(&out);
    assert!(body.contains("VERIFY PASS"), "got: {body}");
    assert!(!body.contains("FAIL "), "got: {body}");
}

#[test]
fn verify_3d_passes() {
    let out = gridlines(&["verify", "--k", "3", "--n-max", "5"]);
    assert_eq!(exit_code(&out), 0);
    assert!(stdout(&out).contains("VERIFY PASS"));
}

#[test]
fn verify_fault_injection_exits_1() {
    let out = gridlines(&["verify", "--inject-fault"]);
    assert_eq!(exit_code(&out), 1);
    let body = stdout(&out);
    assert!(body.contains("VERIFY FAIL"), "got: {body}");
    // Counterexample names the quantity, q, dims, and per-method values.
    assert!(body.contains("quantity=fq q=1 dims="), "got: {body}");
    assert!(body.contains("single"), "got: {body}");
}

#[test]
fn bench_smoke() {
    let out = gridlines(&["bench", "--n-max", "100000", "--explicit-max", "700"]);
    assert_eq!(exit_code(&out), 0);
    let body = stdout(&out);
    assert!(body.starts_with("quantity,q,dims,n,method,value,seconds\n"));
    let coupled_row = body
        .lines()
        .find(|l| l.contains(",coupled,"))
        .expect("recurrence row");
    assert!(coupled_row.starts_with("lgeq,2,100000x100000,100000,coupled,"));
    // Naive and mobius rows at the same size report the same value.
    let naive: Vec<&str> = body
        .lines()
        .filter(|l| l.contains(",naive,"))
        .map(|l| l.split(',').nth(5).unwrap())
        .collect();
    let mobius: Vec<&str> = body
        .lines()
        .filter(|l| l.contains(",mobius,"))
        .map(|l| l.split(',').nth(5).unwrap())
        .collect();
    assert!(!naive.is_empty());
    assert_eq!(naive, mobius);
}

#[test]
fn bench_json_schema() {
    let out = gridlines(&[
        "bench",
        "--n-max",
        "100",
        "--explicit-max",
        "10",
        "--format",
        "json",
    ]);
    assert_eq!(exit_code(&out), 0);
    let doc: serde_json::Value = serde_json::from_str(&stdout(&out)).expect("valid json");
    assert_eq!(doc["schema"], "gridlines/1");
    for row in doc["rows"].as_array().unwrap() {
        assert!(row["seconds"].is_number());
        assert!(row["value"].is_string());
    }
}

/// Identical invocations produce byte-identical output.
#[test]
fn deterministic_output() {
    for args in [
        vec!["table", "--quantity", "lexact", "--q", "3", "--n", "2..9", "--method", "all"],
        vec!["compute", "--quantity", "fq", "--q", "2", "--dims", "6x7x8"],
        vec!["verify", "--n-max", "6", "--q-max", "4"],
    ] {
        let a = gridlines(&args);
        let b = gridlines(&args);
        assert_eq!(exit_code(&a), 0, "args {args:?}");
        assert_eq!(a.stdout, b.stdout, "args {args:?}");
    }
}
