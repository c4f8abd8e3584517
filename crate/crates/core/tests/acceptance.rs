//! Acceptance suite: runs every verification criterion at its stated
//! tolerance and prints one pass/fail line per criterion. The command-line
//! `verify` subcommand runs exactly the same checks.

use symquad_core::verify::{run_one, CRITERIA};

const SEED: u64 = 20240917;

fn run(id: usize) {
    let result = run_one(id, SEED).expect("known criterion id");
    println!("{}", result.line());
    assert!(
        result.passed,
        "criterion {id} failed: {}",
        result.details
    );
}

#[test]
fn criterion_01_reduction_identities() {
    run(1);
}

#[test]
fn criterion_02_case_study_reductions() {
    run(2);
}

#[test]
fn criterion_03_cubic_family_parameter_map() {
    run(3);
}

#[test]
fn criterion_04_discriminant_derivative_law() {
    run(4);
}

#[test]
fn criterion_05_quadratic_and_rational_integrals() {
    run(5);
}

#[test]
fn criterion_06_scaling_group_action() {
    run(6);
}

#[test]
fn criterion_07_numeric_round_trips() {
    run(7);
}

#[test]
fn criterion_08_closed_form_residuals() {
    run(8);
}

#[test]
fn criterion_09_property_suites() {
    run(9);
}

#[test]
fn criterion_10_tolerance_scaling() {
    run(10);
}

#[test]
fn criteria_table_is_complete() {
    let ids: Vec<usize> = CRITERIA.iter().map(|&(id, _)| id).collect();
    assert_eq!(ids, (1..=10).collect::<Vec<_>>());
}
