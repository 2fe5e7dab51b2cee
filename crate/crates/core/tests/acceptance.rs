//! The acceptance gate. Each test runs one selftest criterion and prints
//! its report line, so a failure names the criterion and the first
//! mismatches it saw.

use volog::selftest;

fn run(index: usize) {
    let report = match index {
        1 => selftest::criterion_1(false),
        2 => selftest::criterion_2(),
        3 => selftest::criterion_3(),
        4 => selftest::criterion_4(),
        5 => selftest::criterion_5(),
        6 => selftest::criterion_6(),
        7 => selftest::criterion_7(),
        _ => unreachable!(),
    };
    println!(
        "criterion {} ({}): {} - {}",
        report.index,
        report.name,
        if report.passed { "PASS" } else { "FAIL" },
        report.detail
    );
    assert!(report.passed, "criterion {}: {}", report.index, report.detail);
}

#[test]
fn criterion_1_tate_pipeline_matches_the_closed_form() {
    run(1);
}

#[test]
fn criterion_2_decomposition_reconstructs_and_matches_the_rational_solve() {
    run(2);
}

#[test]
fn criterion_3_subdivision_preserves_the_harmonic_part() {
    run(3);
}

#[test]
fn criterion_4_residues_equal_boundary_orders() {
    run(4);
}

#[test]
fn criterion_5_log_and_teichmuller_match_their_oracles() {
    run(5);
}

#[test]
fn criterion_6_interpolation_hits_the_neighboring_values() {
    run(6);
}

#[test]
fn criterion_7_scope_is_stated() {
    run(7);
}
