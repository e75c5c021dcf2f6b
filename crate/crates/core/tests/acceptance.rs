//! Acceptance suite: one test per golden criterion, each printing a
//! single PASS/FAIL line. Run with `--nocapture` to see the lines for
//! passing tests as well.

use eccf_core::golden;
use eccf_core::error::Result;

fn report(name: &str, outcome: Result<String>) {
    match &outcome {
        Ok(detail) => println!("PASS  {name}: {detail}"),
        Err(e) => println!("FAIL  {name}: {e}"),
    }
    assert!(outcome.is_ok(), "{name} failed: {:?}", outcome.err());
}

#[test]
fn criterion_01_tableau_expansion() {
    report("tableau expansion", golden::tableau_expansion());
}

#[test]
fn criterion_02_normalized_window() {
    report("normalized window", golden::normalized_window());
}

#[test]
fn criterion_03_running_example_window() {
    report("running example window", golden::running_example_window());
}

#[test]
fn criterion_04_higher_gap_relations() {
    report("higher gap relations", golden::higher_gap_relations());
}

#[test]
fn criterion_05_step_addition_correspondence() {
    report("step addition correspondence", golden::step_addition_correspondence(0));
}

#[test]
fn criterion_06_invariant_sweep() {
    report("invariant sweep", golden::invariant_sweep(0));
}

#[test]
fn criterion_07_divisibility_sequence_checks() {
    report("divisibility sequence checks", golden::divisibility_sequence_checks(0));
}

#[test]
fn criterion_08_torsion_detection() {
    report("torsion detection", golden::torsion_detection());
}

#[test]
fn criterion_09_family_normalization() {
    report("family normalization", golden::family_normalization(0));
}

#[test]
fn criterion_10_general_engine_checks() {
    report("general engine checks", golden::general_engine_checks(0));
}
