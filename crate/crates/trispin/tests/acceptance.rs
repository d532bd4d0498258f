//! Acceptance suite: one test per verified claim, each printing a single
//! pass/fail line with the measured figure of merit.
//!
//! Every criterion runs at the tolerances the library enforces internally;
//! nothing is loosened here. Criterion 9 drives the compiled binary to prove
//! the verification path actually gates the exit code.

use std::process::Command;
use trispin::suite::{
    check_builder_agreement, check_contradiction_bound, check_degeneracy_audit,
    check_eigenbasis_structure, check_exclusion_theorem, check_monte_carlo_fidelity,
    check_spectrum_certified, check_two_qubit_protocol, parameter_samples, CheckResult,
    SuiteOptions,
};

const SEED: u64 = 0;
const SAMPLES: u64 = 100_000;
const PARAMETER_DRAWS: usize = 100;

fn report(criterion: usize, result: &CheckResult) {
    let verdict = if result.passed { "PASS" } else { "FAIL" };
    println!(
        "criterion {criterion} ({name}): {verdict} - {detail}",
        name = result.name,
        detail = result.detail
    );
    assert!(result.passed, "criterion {criterion}: {}", result.detail);
}

fn options() -> SuiteOptions {
    SuiteOptions::new(SEED, SAMPLES)
}

#[test]
fn criterion_1_builder_matrix_agreement() {
    let samples = parameter_samples(SEED, PARAMETER_DRAWS);
    let result = check_builder_agreement(&options(), &samples).unwrap();
    report(1, &result);
}

#[test]
fn criterion_2_analytic_spectrum_certified() {
    let samples = parameter_samples(SEED, PARAMETER_DRAWS);
    let result = check_spectrum_certified(&options(), &samples).unwrap();
    report(2, &result);
}

#[test]
fn criterion_3_eigenbasis_orthonormal_complete() {
    let samples = parameter_samples(SEED, PARAMETER_DRAWS);
    let result = check_eigenbasis_structure(&samples).unwrap();
    report(3, &result);
}

#[test]
fn criterion_4_degeneracy_audit() {
    let result = check_degeneracy_audit().unwrap();
    report(4, &result);
}

#[test]
fn criterion_5_exclusion_theorem_three_spin() {
    let result = check_exclusion_theorem().unwrap();
    report(5, &result);
}

#[test]
fn criterion_6_two_qubit_protocol() {
    let result = check_two_qubit_protocol().unwrap();
    report(6, &result);
}

#[test]
fn criterion_7_contradiction_bound() {
    let result = check_contradiction_bound(&options()).unwrap();
    report(7, &result);
}

#[test]
fn criterion_8_monte_carlo_fidelity() {
    let result = check_monte_carlo_fidelity(&options()).unwrap();
    report(8, &result);
}

#[test]
fn criterion_9_cli_contract_mutation_test() {
    let bin = env!("CARGO_BIN_EXE_trispin");

    let clean = Command::new(bin)
        .args(["all-checks", "--samples", "20000"])
        .output()
        .expect("run all-checks");
    let clean_code = clean.status.code();

    let corrupted = Command::new(bin)
        .args([
            "all-checks",
            "--samples",
            "20000",
            "--inject-matrix-error",
            "1,3,1e-6",
        ])
        .output()
        .expect("run all-checks with an injected matrix error");
    let corrupted_code = corrupted.status.code();

    let passed = clean_code == Some(0) && corrupted_code == Some(1);
    let verdict = if passed { "PASS" } else { "FAIL" };
    println!(
        "criterion 9 (cli-contract): {verdict} - all-checks exit {clean_code:?}, \
         with entry (1,3) shifted by 1e-6 exit {corrupted_code:?} (want Some(0) then Some(1))"
    );
    assert_eq!(clean_code, Some(0), "clean all-checks must exit 0");
    assert_eq!(
        corrupted_code,
        Some(1),
        "a 1e-6 corruption of one reference entry must flip the exit code to 1; stdout: {}",
        String::from_utf8_lossy(&corrupted.stdout)
    );
}
