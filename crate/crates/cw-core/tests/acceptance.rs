//! The acceptance gate: one test per criterion. Each test prints the
//! criterion's summary line and measured quantities, then asserts the
//! verdict. Criterion 7 is expected to fail as long as the exact-zero
//! search is capped below the system sizes whose zeros enter its annulus;
//! the failure is deliberate and documented in the criterion's notes.

use cw_core::checks::{
    criterion_01_oracle_equivalence, criterion_02_integral_identity,
    criterion_03_theorem1_convergence, criterion_04_branch_formula_error_constant,
    criterion_05_trichotomy, criterion_06_corollary1_zero_pairing,
    criterion_07_corollary2_weak_convergence, criterion_08_theorem2_line,
    criterion_09_inequality_grids, criterion_10_conjecture_probe, CriterionReport,
};

fn show(report: &CriterionReport) -> String {
    let mut out = report.summary_line();
    for (name, value) in &report.measured {
        out.push_str(&format!("\n    {name} = {value:.6e}"));
    }
    for note in &report.notes {
        out.push_str(&format!("\n    note: {note}"));
    }
    out
}

fn assert_pass(report: &CriterionReport) {
    println!("{}", show(report));
    assert!(report.passed, "{}", show(report));
}

#[test]
fn criterion_01_enumeration_and_binomial_sums_agree() {
    assert_pass(&criterion_01_oracle_equivalence().expect("criterion machinery"));
}

#[test]
fn criterion_02_integral_representation_matches_the_sum() {
    assert_pass(&criterion_02_integral_identity().expect("criterion machinery"));
}

#[test]
fn criterion_03_partition_function_converges_at_the_stated_rate() {
    assert_pass(&criterion_03_theorem1_convergence().expect("criterion machinery"));
}

#[test]
fn criterion_04_branch_formula_error_is_uniformly_scaled() {
    assert_pass(&criterion_04_branch_formula_error_constant().expect("criterion machinery"));
}

#[test]
fn criterion_05_saddle_sign_trichotomy_brackets_r0() {
    assert_pass(&criterion_05_trichotomy().expect("criterion machinery"));
}

#[test]
fn criterion_06_zeros_sit_on_gamma_and_pair_across_methods() {
    assert_pass(&criterion_06_corollary1_zero_pairing().expect("criterion machinery"));
}

#[test]
fn criterion_07_zero_counting_measures_converge() {
    assert_pass(&criterion_07_corollary2_weak_convergence().expect("criterion machinery"));
}

#[test]
fn criterion_08_tilted_curve_free_energy_is_positive_at_the_predicted_level() {
    assert_pass(&criterion_08_theorem2_line().expect("criterion machinery"));
}

#[test]
fn criterion_09_landscape_inequalities_hold_on_their_grids() {
    assert_pass(&criterion_09_inequality_grids().expect("criterion machinery"));
}

#[test]
fn criterion_10_conjecture_probe_is_flagged_with_the_crossing_confirmed() {
    let report = criterion_10_conjecture_probe().expect("criterion machinery");
    println!("{}", show(&report));
    // The probe may not satisfy its literal transition condition (see the
    // report notes); the gate requires only that the failure stays advisory
    // and that the limit free energy crosses zero on the curve itself.
    assert!(report.advisory, "{}", show(&report));
    for r in [5.0, 10.0, 20.0] {
        let key = format!("R={r} crossing offset from eps0");
        let offset = report
            .measured
            .iter()
            .find(|(name, _)| *name == key)
            .map(|(_, v)| *v)
            .expect("crossing offset reported");
        assert!(
            offset.abs() <= 0.005,
            "limit-F crossing at R = {r} off the curve by {offset:.2e}\n{}",
            show(&report)
        );
    }
}
