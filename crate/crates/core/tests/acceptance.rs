//! One test per acceptance criterion. Each prints a single PASS/FAIL line.

use hopfc_core::acceptance::run_suite;
use hopfc_core::corpus::DEFAULT_SEED;

fn criterion(id: u8) {
    let out = run_suite(id, DEFAULT_SEED).expect("known suite");
    println!("{}", out.line());
    for d in &out.detail {
        println!("    {d}");
    }
    assert!(out.passed, "{}", out.line());
}

#[test]
fn c01_rewriting_terminates_and_preserves_values() {
    criterion(1);
}

#[test]
fn c02_local_confluence() {
    criterion(2);
}

#[test]
fn c03_convolution_laws() {
    criterion(3);
}

#[test]
fn c04_bar_relations() {
    criterion(4);
}

#[test]
fn c05_markov_relations_under_psi0() {
    criterion(5);
}

#[test]
fn c06_contraction_identities() {
    criterion(6);
}

#[test]
fn c07_retraction_and_factorization() {
    criterion(7);
}

#[test]
fn c08_poincare_sphere() {
    criterion(8);
}

#[test]
fn c09_normalization_identities() {
    criterion(9);
}

#[test]
fn c10_bundle_axioms_and_corruptions() {
    criterion(10);
}

#[test]
fn c11_gauss_sum_cross_check() {
    criterion(11);
}
