//! Runs the fast acceptance checks in-process and prints one line each.

use contracted_kernels::verify::{run_suite, VerifyOptions};

fn main() {
    let report = run_suite(&VerifyOptions::default());
    for c in &report.checks {
        println!("{}", c.line());
    }
    println!("{} failing", report.failures);
}
