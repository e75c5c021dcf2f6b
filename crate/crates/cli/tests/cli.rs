//! End-to-end runs of the eccf binary over its subcommands.

use std::fs;
use std::path::PathBuf;
use std::process::{Command, Output};

use eccf_core::sequences::IndexedSequence;

fn eccf(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_eccf"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout_ok(args: &[&str]) -> String {
    let out = eccf(args);
    assert!(
        out.status.success(),
        "command {args:?} failed: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout).expect("utf8 output")
}

fn temp_file(name: &str, contents: &str) -> PathBuf {
    let path = std::env::temp_dir().join(name);
    fs::write(&path, contents).expect("temp file written");
    path
}

#[test]
fn expand_prints_the_worked_tableau() {
    let text = stdout_ok(&[
        "expand", "--curve", "-29,-48,240", "--point", "-3,-4", "--v0", "8", "--steps", "3",
        "--back", "3",
    ]);
    assert!(text.contains("(f = -29, v = -48, u = 240)"), "{text}");
    assert!(text.contains("line 0:"), "{text}");
    assert!(text.contains("[w = -3, v = 8, e = 8]"), "{text}");
    assert!(text.contains("[w = -1, v = -6, e = 12]"), "{text}");
    assert!(text.contains("[w = -2, v = 32/3, e = 16]"), "{text}");
    assert!(text.contains("[w = -10/3, v = -27/8, e = 9]"), "{text}");
    // Backward lines mirror the forward e-values.
    assert!(text.contains("line -3:"), "{text}");
    assert!(text.contains("[w = -2, v = -16/3, e = 9]"), "{text}");
}

#[test]
fn expand_emits_csv_rows() {
    let text = stdout_ok(&[
        "--output", "csv", "expand", "--curve", "-29,-48,240", "--point", "-3,-4", "--v0", "8",
        "--steps", "2",
    ]);
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("h,w,v,e,e_next"));
    assert_eq!(lines.next(), Some("0,-3,8,8,12"));
    assert_eq!(lines.next(), Some("1,-1,-6,12,16"));
}

#[test]
fn expand_general_checks_norms() {
    let text = stdout_ok(&[
        "expand", "--general", "--D", "X^4-6X^2+4X+1", "--steps", "5",
    ]);
    assert!(text.contains("line 5:"), "{text}");
    assert!(text.contains("norm identity verified on 5 lines"), "{text}");
}

#[test]
fn zero_v_routes_to_the_general_engine() {
    let out = eccf(&["expand", "--curve", "1,0,-1", "--steps", "3"]);
    assert!(out.status.success());
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("v = 0"), "{err}");
    let text = String::from_utf8_lossy(&out.stdout);
    assert!(text.contains("D = X^4 + 2*X^2 + 5"), "{text}");
}

#[test]
fn somos_generates_the_unit_gap5_window() {
    let text = stdout_ok(&[
        "somos", "--rel", "5", "--coeffs", "1,1", "--init", "1,1,1,1,1", "--range", "-5..12",
    ]);
    assert!(text.contains("A(-5) = 37"), "{text}");
    assert!(text.contains("A(9) = 37"), "{text}");
    assert!(text.contains("A(10) = 83"), "{text}");
    assert!(text.contains("A(12) = 1217"), "{text}");
}

#[test]
fn somos_truncates_at_zero_over_a_prime_field() {
    let text = stdout_ok(&[
        "--field", "fp:7", "somos", "--rel", "4", "--coeffs", "1,1", "--init", "1,1,1,1",
        "--range", "0..10",
    ]);
    assert!(text.contains("A(6) = 0"), "{text}");
    assert!(!text.contains("A(7)"), "{text}");
}

#[test]
fn somos_json_round_trips() {
    let text = stdout_ok(&[
        "--output", "json", "somos", "--rel", "4", "--coeffs", "1,1", "--init", "1,1,1,1",
        "--range", "-5..5",
    ]);
    let doc: serde_json::Value = serde_json::from_str(&text).expect("valid json");
    let seq = IndexedSequence::from_json(&doc["sequence"]).expect("sequence parses");
    assert_eq!(seq.min_index(), -5);
    assert_eq!(seq.max_index(), 5);
    assert_eq!(seq.to_json(), doc["sequence"]);
}

#[test]
fn verify_passes_and_fails_with_matching_exits() {
    let json = stdout_ok(&[
        "--output", "json", "somos", "--rel", "4", "--coeffs", "1,1", "--init", "1,1,1,1",
        "--range", "-10..10",
    ]);
    let path = temp_file("eccf_verify_somos4.json", &json);
    let path_str = path.to_str().unwrap();

    let good = eccf(&["verify", "--rel", "8", "--coeffs", "25,-4", "--seq", path_str]);
    assert!(good.status.success(), "{:?}", good);
    assert!(String::from_utf8_lossy(&good.stdout).contains("relation holds"));

    let bad = eccf(&["verify", "--rel", "4", "--coeffs", "1,2", "--seq", path_str]);
    assert_eq!(bad.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&bad.stdout).contains("first failure"));

    fs::remove_file(path).ok();
}

#[test]
fn eds_prints_division_values_and_relations() {
    let text = stdout_ok(&["eds", "--curve", "-3,1,2", "--hmax", "9", "--relations"]);
    assert!(text.contains("W(7) = 129"), "{text}");
    assert!(text.contains("W(8) = -65"), "{text}");
    assert!(text.contains("W(9) = -3689"), "{text}");
    assert!(text.contains("W(-7) = -129"), "{text}");
    assert!(text.contains("gap 5: kappa = -1, lambda = 5"), "{text}");
    assert!(text.contains("gap 8: kappa = 25, lambda = -4"), "{text}");
    assert!(text.contains("side identities hold: true"), "{text}");
}

#[test]
fn torsion_reports_the_detected_order() {
    let text = stdout_ok(&["torsion", "--curve", "-1,1,1", "--from-w"]);
    assert!(text.contains("torsion at m = 3"), "{text}");
    assert!(text.contains("quasi-period 2, full period 2"), "{text}");
    assert!(text.contains("period rule ok: true"), "{text}");
}

#[test]
fn curve_actions_compose() {
    let map = stdout_ok(&["curve", "map", "--curve", "-3,1,2", "--point", "1,0"]);
    assert!(map.contains("discriminant: 37"), "{map}");
    assert!(map.contains("image of S: (0, 0)"), "{map}");
    assert!(map.contains("image of the point: (-1, 0)"), "{map}");

    let sum = stdout_ok(&["curve", "add", "--curve", "-3,1,2", "--p", "0,0", "--q", "O"]);
    assert_eq!(sum.trim(), "(0, 0)");

    let single = stdout_ok(&["curve", "mul", "--curve", "-3,1,2", "--n", "1", "--p", "0,0"]);
    assert_eq!(single.trim(), "(0, 0)");

    let steps = stdout_ok(&[
        "curve", "steps", "--curve", "-3,1,2", "--point", "1,0", "--v0", "1", "--hmax", "10",
    ]);
    assert!(steps.contains("verified on 20 lines"), "{steps}");
}

#[test]
fn reprise_recovers_the_tableau_curve() {
    let text = stdout_ok(&["reprise", "--k", "-2", "--steps", "4"]);
    assert!(text.contains("f = -29, v = -48, u = 240"), "{text}");
    assert!(text.contains("w_0 = -3, v_0 = 8"), "{text}");
    assert!(text.contains("c_0 = 8, c_1 = 12"), "{text}");
    assert!(text.contains("B(0) = 1"), "{text}");
    assert!(text.contains("B(3) = 2"), "{text}");
    assert!(text.contains("B(-4) = 3"), "{text}");
}

#[test]
fn renormalize_strips_the_constant_factor() {
    let json = stdout_ok(&[
        "--output", "json", "somos", "--rel", "5", "--coeffs", "36,216", "--init",
        "1,1,3,36,972", "--range", "-4..8",
    ]);
    let path = temp_file("eccf_renorm_a.json", &json);
    let text = stdout_ok(&[
        "renormalize", "--seq", path.to_str().unwrap(), "--rel", "5", "--coeffs", "1,1",
    ]);
    assert!(text.contains("fitted gap 5: kappa = 36, lambda = 216"), "{text}");
    assert!(text.contains("gamma = 6"), "{text}");
    assert!(text.contains("B(-4) = 3"), "{text}");
    assert!(text.contains("B(8) = 83"), "{text}");
    fs::remove_file(path).ok();
}

#[test]
fn examples_filtered_run_passes() {
    let text = stdout_ok(&["examples", "--only", "tableau"]);
    assert!(text.contains("PASS  tableau expansion"), "{text}");
    assert!(text.contains("SELECTED GOLDEN CHECKS PASS (1 of 10)"), "{text}");
}

#[test]
#[ignore = "runs the full golden suite; covered per-check by the acceptance tests"]
fn examples_full_suite_passes() {
    let text = stdout_ok(&["examples"]);
    assert!(text.contains("ALL GOLDEN CHECKS PASS"), "{text}");
}
