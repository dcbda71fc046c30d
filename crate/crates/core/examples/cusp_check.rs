//! Monte Carlo estimate of the linear cusp term in the relative coordinate,
//! with the mollifier on either particle.
//!
//! Takes about a second with the default sample count; pass a different
//! count as the first argument.

use contracted_kernels::contraction::{cusp_expansion_check, exchange_leading_equivalence, DEFAULT_C12, DEFAULT_CUSP_RHOS};
use contracted_kernels::kernels::Vec3;

fn main() -> contracted_kernels::Result<()> {
    let n: usize = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(500_000);
    let (b, beta, seed) = (Vec3::ZERO, 25.0, 11);

    let c = cusp_expansion_check(b, beta, Vec3::ZERO, &DEFAULT_CUSP_RHOS, DEFAULT_C12, n, seed)?;
    for (rho, v) in c.z1_norms.iter().zip(&c.values) {
        println!("|z1| = {rho:.3}: {:.6} +- {:.6}", v.value, v.stderr);
    }
    println!("slope {:.4} +- {:.4}, predicted {:.4}", c.slope_estimate, c.stderr, c.slope_predicted);

    let ex = exchange_leading_equivalence(b, beta, DEFAULT_C12, n, seed)?;
    println!(
        "direct {:.4} +- {:.4}, exchange {:.4} +- {:.4}, agree: {}",
        ex.direct_leading.value,
        ex.direct_leading.stderr,
        ex.exchange_leading.value,
        ex.exchange_leading.stderr,
        ex.agree()
    );
    Ok(())
}
