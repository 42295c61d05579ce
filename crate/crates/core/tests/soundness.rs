//! Randomized soundness checks against high-precision and exact oracles.

mod common;

fn assert_clean(name: &str, r: &common::Report) {
    assert!(r.ok(), "{name}: {} checked, violations: {:#?}", r.checked, r.violations);
}

#[test]
fn interval_operations_enclose_point_images() {
    let r = common::interval_soundness(100_000, 0x5eed_0001);
    assert!(r.checked >= 150_000);
    assert_clean("interval", &r);
}

#[test]
fn quadrature_contains_closed_forms() {
    assert_clean("quadrature", &common::quadrature_containment(100, 0x5eed_0002));
}

#[test]
fn quadrature_refinement_nests() {
    assert_clean("quadrature refinement", &common::quadrature_refinement(20, 0x5eed_0003));
}

#[test]
fn table_refinement_nests() {
    assert_clean("table refinement", &common::table_refinement(2_000, 0x5eed_0004));
}

#[test]
fn g_is_multiplicative() {
    assert_clean("g", &common::g_multiplicativity(10_000));
}
