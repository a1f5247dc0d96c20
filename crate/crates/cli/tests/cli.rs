//! End-to-end tests of the binary: real files in, JSON out, exit codes.

use std::path::PathBuf;
use std::process::Command;

use subtable_sum::io::{ClassifyOut, ConnectOut, FiberOut, MoveOut, VerifyOut};
use subtable_sum::mcmc::TestReport;

const EXAMPLE_TRIANGULAR: &str =
    r#"{"rows":3,"cols":3,"table":[[7,5,1],[5,10,6],[2,6,8]],"subtable":[[1,1],[2,1]]}"#;
const EXAMPLE_NEITHER: &str =
    r#"{"rows":3,"cols":3,"table":[[7,5,1],[5,10,6],[2,6,8]],"subtable":[[1,1],[2,2]]}"#;

fn write_file(name: &str, content: &str) -> PathBuf {
    let path = PathBuf::from(env!("CARGO_TARGET_TMPDIR")).join(name);
    std::fs::write(&path, content).unwrap();
    path
}

fn run(args: &[&str]) -> (String, String, i32) {
    let output = Command::new(env!("CARGO_BIN_EXE_subtable-sum"))
        .args(args)
        .output()
        .expect("binary runs");
    (
        String::from_utf8(output.stdout).unwrap(),
        String::from_utf8(output.stderr).unwrap(),
        output.status.code().expect("no signal"),
    )
}

#[test]
fn classify_triangular_mask() {
    let input = write_file("classify_t.json", EXAMPLE_TRIANGULAR);
    let (stdout, _, code) = run(&["classify", "-i", input.to_str().unwrap()]);
    assert_eq!(code, 0);
    let out: ClassifyOut = serde_json::from_str(&stdout).unwrap();
    assert_eq!(out.verdict, "Triangular");
    assert_eq!(out.row_order, Some(vec![1, 2, 3]));
    assert!(out.witness.is_none());
}

#[test]
fn classify_neither_mask_reports_a_witness() {
    let input = write_file("classify_n.json", EXAMPLE_NEITHER);
    let (stdout, _, code) = run(&["classify", "-i", input.to_str().unwrap()]);
    assert_eq!(code, 0);
    let out: ClassifyOut = serde_json::from_str(&stdout).unwrap();
    assert_eq!(out.verdict, "Neither");
    let witness = out.witness.unwrap();
    assert_eq!(witness.rows, vec![1, 2]);
    assert_eq!(witness.cols, vec![1, 2, 3]);
    assert_eq!(witness.host, "subtable");
}

#[test]
fn classify_rejects_an_empty_subtable() {
    let input = write_file(
        "classify_empty.json",
        r#"{"rows":3,"cols":3,"subtable":[]}"#,
    );
    let (_, stderr, code) = run(&["classify", "-i", input.to_str().unwrap()]);
    assert_eq!(code, 2);
    assert!(stderr.contains("error:"), "{stderr}");
}

#[test]
fn basis_lists_moves_in_both_formats() {
    let input = write_file("basis.json", EXAMPLE_TRIANGULAR);
    let (stdout, _, code) = run(&["basis", "-i", input.to_str().unwrap()]);
    assert_eq!(code, 0);
    let moves: Vec<MoveOut> = serde_json::from_str(&stdout).unwrap();
    assert_eq!(moves.len(), 5);
    assert_eq!(
        moves[0],
        MoveOut {
            rows: [1, 2],
            cols: [1, 2]
        }
    );

    let (stdout, _, code) = run(&["basis", "-i", input.to_str().unwrap(), "--format", "csv"]);
    assert_eq!(code, 0);
    let lines: Vec<&str> = stdout.trim_end().lines().collect();
    assert_eq!(lines.len(), 5);
    assert_eq!(lines[0], "1,2,1,2");
}

#[test]
fn witness_exists_exactly_when_the_moves_fail() {
    let input = write_file("witness_n.json", EXAMPLE_NEITHER);
    let (stdout, _, code) = run(&["witness", "-i", input.to_str().unwrap()]);
    assert_eq!(code, 0);
    let out: serde_json::Value = serde_json::from_str(&stdout).unwrap();
    assert_eq!(out["exists"], true);
    assert_eq!(out["fiber_size"], 2);
    assert_eq!(out["component_count"], 2);

    let input = write_file("witness_t.json", EXAMPLE_TRIANGULAR);
    let (stdout, _, code) = run(&["witness", "-i", input.to_str().unwrap()]);
    assert_eq!(code, 0);
    let out: serde_json::Value = serde_json::from_str(&stdout).unwrap();
    assert_eq!(out, serde_json::json!({"exists": false}));
}

#[test]
fn verify_separates_the_two_masks() {
    let input = write_file("verify_t.json", EXAMPLE_TRIANGULAR);
    let (stdout, _, code) = run(&["verify", "-i", input.to_str().unwrap(), "--max-total", "3"]);
    assert_eq!(code, 0);
    let out: VerifyOut = serde_json::from_str(&stdout).unwrap();
    assert!(out.all_connected);
    assert_eq!(out.checked_marginals, 527);

    let input = write_file("verify_n.json", EXAMPLE_NEITHER);
    let (stdout, _, code) = run(&["verify", "-i", input.to_str().unwrap(), "--max-total", "3"]);
    assert_eq!(code, 0);
    let out: VerifyOut = serde_json::from_str(&stdout).unwrap();
    assert!(!out.all_connected);
    assert!(!out.disconnected.is_empty());
}

#[test]
fn verify_work_bound_exits_three() {
    let input = write_file("verify_big.json", EXAMPLE_TRIANGULAR);
    let (_, stderr, code) = run(&[
        "verify",
        "-i",
        input.to_str().unwrap(),
        "--max-total",
        "1000000",
    ]);
    assert_eq!(code, 3);
    assert!(stderr.contains("bound"), "{stderr}");
}

#[test]
fn connect_finds_a_one_step_path() {
    let input = write_file("connect_p.json", EXAMPLE_TRIANGULAR);
    let x = write_file("connect_p_x.csv", "0,1,0\n1,0,0\n0,0,0\n");
    let y = write_file("connect_p_y.csv", "1,0,0\n0,1,0\n0,0,0\n");
    let (stdout, _, code) = run(&[
        "connect",
        "-i",
        input.to_str().unwrap(),
        "--x",
        x.to_str().unwrap(),
        "--y",
        y.to_str().unwrap(),
    ]);
    assert_eq!(code, 0);
    let out: ConnectOut = serde_json::from_str(&stdout).unwrap();
    assert!(out.connected);
    let path = out.path.unwrap();
    assert_eq!(path.len(), 1);
    assert_eq!(path[0].rows, [1, 2]);
    assert_eq!(path[0].cols, [1, 2]);
    assert_eq!(path[0].sign, 1);
}

#[test]
fn connect_certifies_a_disconnection_with_exit_zero() {
    let input = write_file(
        "connect_c.json",
        r#"{"rows":2,"cols":3,"subtable":[[1,1],[2,2]]}"#,
    );
    let x = write_file("connect_c_x.csv", "0,0,2\n1,1,0\n");
    let y = write_file("connect_c_y.csv", "1,1,0\n0,0,2\n");
    let (stdout, _, code) = run(&[
        "connect",
        "-i",
        input.to_str().unwrap(),
        "--x",
        x.to_str().unwrap(),
        "--y",
        y.to_str().unwrap(),
    ]);
    assert_eq!(code, 0);
    let out: ConnectOut = serde_json::from_str(&stdout).unwrap();
    assert!(!out.connected);
    let cert = out.certificate.unwrap();
    assert_eq!(cert.fiber_size, 2);
    assert_eq!(cert.component_count, 2);
    assert_eq!(cert.unreachable_example, vec![vec![1, 1, 0], vec![0, 0, 2]]);
}

#[test]
fn connect_rejects_tables_from_different_fibers() {
    let input = write_file("connect_d.json", EXAMPLE_TRIANGULAR);
    let x = write_file("connect_d_x.csv", "0,1,0\n1,0,0\n0,0,0\n");
    let y = write_file("connect_d_y.csv", "0,1,0\n0,1,0\n0,0,0\n");
    let (_, stderr, code) = run(&[
        "connect",
        "-i",
        input.to_str().unwrap(),
        "--x",
        x.to_str().unwrap(),
        "--y",
        y.to_str().unwrap(),
    ]);
    assert_eq!(code, 2);
    assert!(stderr.contains("different fibers"), "{stderr}");
}

#[test]
fn exact_test_is_deterministic_and_warns_as_classified() {
    let input = write_file("test_t.json", EXAMPLE_TRIANGULAR);
    let args = [
        "test",
        "-i",
        input.to_str().unwrap(),
        "--steps",
        "2000",
        "--burn-in",
        "200",
        "--thin",
        "5",
        "--seed",
        "7",
    ];
    let (first, _, code) = run(&args);
    assert_eq!(code, 0);
    let (second, _, _) = run(&args);
    assert_eq!(first, second);
    let report: TestReport = serde_json::from_str(&first).unwrap();
    assert_eq!(report.observed_statistic, 9.183891505320076);
    assert!((0.0..=1.0).contains(&report.p_value_estimate));
    assert_eq!(report.samples_used, 361);
    assert!(!report.connectivity_warning);

    let input = write_file("test_n.json", EXAMPLE_NEITHER);
    let (stdout, _, code) = run(&[
        "test",
        "-i",
        input.to_str().unwrap(),
        "--steps",
        "500",
        "--burn-in",
        "0",
        "--thin",
        "1",
        "--seed",
        "1",
    ]);
    assert_eq!(code, 0);
    let report: TestReport = serde_json::from_str(&stdout).unwrap();
    assert!(report.connectivity_warning);
}

#[test]
fn fiber_enumerates_in_both_formats() {
    // No subtable constraint beyond the margins: the three 2×2 tables
    // with all sums 2. The empty mask is fine here; only the classifier
    // demands a proper non-empty subset.
    let input = write_file(
        "fiber.json",
        r#"{"rows":2,"cols":2,"table":[[1,1],[1,1]],"subtable":[]}"#,
    );
    let (stdout, _, code) = run(&["fiber", "-i", input.to_str().unwrap()]);
    assert_eq!(code, 0);
    let out: FiberOut = serde_json::from_str(&stdout).unwrap();
    assert_eq!(out.size, 3);
    assert_eq!(out.elements[0], vec![vec![0, 2], vec![2, 0]]);

    let (stdout, _, code) = run(&["fiber", "-i", input.to_str().unwrap(), "--format", "csv"]);
    assert_eq!(code, 0);
    assert_eq!(stdout, "0,2\n2,0\n\n1,1\n1,1\n\n2,0\n0,2\n\n");
}

#[test]
fn fiber_without_a_table_exits_two() {
    let input = write_file("fiber_nt.json", r#"{"rows":2,"cols":2,"subtable":[[1,1]]}"#);
    let (_, stderr, code) = run(&["fiber", "-i", input.to_str().unwrap()]);
    assert_eq!(code, 2);
    assert!(stderr.contains("table"), "{stderr}");
}

#[test]
fn unreadable_or_malformed_input_exits_two() {
    let (_, stderr, code) = run(&["classify", "-i", "/nonexistent/problem.json"]);
    assert_eq!(code, 2);
    assert!(stderr.contains("error:"), "{stderr}");

    let input = write_file("malformed.json", "{not json");
    let (_, stderr, code) = run(&["classify", "-i", input.to_str().unwrap()]);
    assert_eq!(code, 2);
    assert!(stderr.contains("problem file"), "{stderr}");
}
