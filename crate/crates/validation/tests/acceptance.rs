//! One test per acceptance criterion. Each prints its pass/fail line and
//! diagnostics, then asserts the verdict.

use lienard_core::criteria::{self, Criterion};
use lienard_core::rng::DEFAULT_SEED;

fn check(c: Criterion) {
    println!("{}", c.line());
    for i in &c.info {
        println!("      {i}");
    }
    assert!(c.passed, "{}", c.line());
}

#[test]
fn criterion_01_harmonic_image_spectrum() {
    check(criteria::harmonic_image_spectrum());
}

#[test]
fn criterion_02_isotonic_image_spectrum() {
    check(criteria::isotonic_image_spectrum());
}

#[test]
fn criterion_03_ladder_exactness() {
    check(criteria::ladder_exactness());
}

#[test]
fn criterion_04_ladder_overlap() {
    check(criteria::ladder_overlap());
}

#[test]
fn criterion_05_symmetry_classification() {
    check(criteria::symmetry_classification(DEFAULT_SEED));
}

#[test]
fn criterion_06_delta78_identity() {
    check(criteria::delta78_identity(DEFAULT_SEED));
}

#[test]
fn criterion_07_isochrony() {
    check(criteria::isochrony());
}

#[test]
fn criterion_08_hidden_linearity() {
    check(criteria::hidden_linearity());
}

#[test]
fn criterion_09_closed_form_residuals() {
    check(criteria::closed_form_residuals(DEFAULT_SEED));
}

#[test]
fn criterion_10_vonroos_cross_check() {
    check(criteria::vonroos_cross_check(DEFAULT_SEED));
}

#[test]
fn criterion_11_convergence_order() {
    check(criteria::convergence_order());
}
