//! Runs every acceptance criterion at its stated tolerance and prints one
//! PASS/FAIL line each.
//!
//! Criteria 5, 6 and 7 cannot hold as stated: the exact limits of the
//! regularized kernel differ from the leading-order values they compare
//! against. They run unchanged and report FAIL; the target exits non-zero
//! only if an attainable criterion fails or a known failure stops matching
//! the exact value that explains it.

use std::process::ExitCode;

use contracted_kernels::contraction::{psi0_limit_beta_inf, psi0_limit_beta_inf_exact, psi0_limit_r0, psi0_limit_r0_exact};
use contracted_kernels::quadrature::QuadConfig;
use contracted_kernels::verify::{run_check, VerifyOptions, CRITERIA};

/// Measured value each unattainable criterion must reproduce, with tolerance.
fn known_failure(id: u8) -> Option<(f64, f64)> {
    let cfg = QuadConfig::default();
    match id {
        // ratio to 2 pi^2 beta at r = 1e-4 equals the exact r -> 0 ratio
        5 => Some((psi0_limit_r0_exact(1e3, 1.0).unwrap() / psi0_limit_r0(1e3, 1.0), 1e-4)),
        // deviation at beta = 1e6 equals 1 - exact limit / leading term
        6 => Some((1.0 - psi0_limit_beta_inf_exact(0.5, 1.0, &cfg).unwrap().value / psi0_limit_beta_inf(0.5, 1.0), 1e-3)),
        // all three table properties fail
        7 => Some((3.0, 0.0)),
        _ => None,
    }
}

fn main() -> ExitCode {
    let opts = VerifyOptions { include_slow: true, ..Default::default() };
    let mut passed = 0;
    let mut known = 0;
    let mut unexpected = Vec::new();
    for (id, _, _) in CRITERIA {
        let report = run_check(id, &opts);
        println!("{}", report.line());
        match (report.passed(), known_failure(id)) {
            (true, None) => passed += 1,
            (false, Some((value, tol))) if (report.measured - value).abs() <= tol => known += 1,
            (false, Some((value, _))) => unexpected.push(format!("criterion {id}: measured {} but expected {value}", report.measured)),
            (true, Some(_)) => unexpected.push(format!("criterion {id}: passed but is recorded as unattainable")),
            (false, None) => unexpected.push(format!("criterion {id}: failed")),
        }
    }
    println!("acceptance: {passed} passed, {known} failed as recorded (5, 6, 7), {} unexpected", unexpected.len());
    for u in &unexpected {
        println!("unexpected: {u}");
    }
    if unexpected.is_empty() {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
