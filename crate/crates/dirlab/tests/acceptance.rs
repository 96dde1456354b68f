//! Acceptance suite: one test per criterion, sharing the implementations in
//! `dirlab::selftest` so `cargo test --test acceptance` and `dirlab selftest`
//! check exactly the same things. Each test prints its pass/fail line before
//! asserting, so a red run still reports every criterion it reached.

use dirlab::selftest::{self, CriterionResult, DEFAULT_M_CAP, DEFAULT_SEED};

fn report(r: CriterionResult) {
    println!(
        "criterion {} [{}] {}: {}",
        r.id,
        if r.pass { "PASS" } else { "FAIL" },
        r.name,
        r.details
    );
    assert!(r.pass, "criterion {} ({}) failed: {}", r.id, r.name, r.details);
}

fn m_cap() -> usize {
    std::env::var("DIRLAB_MAX_M")
        .ok()
        .and_then(|v| v.parse().ok())
        .map_or(DEFAULT_M_CAP, |cap: usize| cap.min(DEFAULT_M_CAP))
}

#[test]
fn criterion_1_sharp_constants() {
    report(selftest::criterion_sharp_constants());
}

#[test]
fn criterion_2_closed_form_maximizer() {
    report(selftest::criterion_closed_form_maximizer());
}

#[test]
fn criterion_3_energy_route_equality() {
    report(selftest::criterion_route_equality(DEFAULT_SEED));
}

#[test]
fn criterion_4_analytic_spot_values() {
    report(selftest::criterion_spot_values());
}

#[test]
fn criterion_5_theorem_inequality_suite() {
    report(selftest::criterion_inequality_suite(DEFAULT_SEED));
}

#[test]
fn criterion_6_monotone_truncation() {
    report(selftest::criterion_monotone_truncation());
}

#[test]
fn criterion_7_sharpness_sweep() {
    report(selftest::criterion_sharpness_sweep(m_cap()));
}

#[test]
fn criterion_8_degenerate_identities() {
    report(selftest::criterion_degenerate_identities());
}
