//! The mollified contracted kernel `Psi_beta(r)`: Dawson closed form, direct
//! 2-d quadrature, Taylor approximants and both limits.

use contracted_kernels::contraction::{
    psi0_closed, psi0_limit_beta_inf, psi0_limit_beta_inf_exact, psi0_limit_r0, psi0_limit_r0_exact, psi0_quad2d, psi0_taylor, Psi0Params,
};
use contracted_kernels::quadrature::QuadConfig;

fn main() -> contracted_kernels::Result<()> {
    let cfg = QuadConfig::new(1e-10, 1e-300, 400_000)?;
    let c12 = 1.0;

    println!("closed form against 2-d quadrature, beta = 50");
    for r in [0.1, 0.5, 1.0] {
        let p = Psi0Params::new(r, 50.0, c12)?;
        let a = psi0_closed(&p, &cfg)?.value;
        let b = psi0_quad2d(&p, &cfg)?.value;
        println!("  r = {r}: {a:.12e}  rel.diff {:.1e}", ((a - b) / a).abs());
    }

    let beta = 1000.0;
    println!("\nbeta = {beta}: closed, Taylor 1..3, exact and leading beta -> inf limits");
    for r in [0.1, 0.3, 0.5] {
        let p = Psi0Params::new(r, beta, c12)?;
        let mut line = format!("  r = {r}: {:.6e}", psi0_closed(&p, &cfg)?.value);
        for k in 1..=3 {
            line += &format!(" {:.6e}", psi0_taylor(k, &p, &cfg)?.value);
        }
        let exact = psi0_limit_beta_inf_exact(r, c12, &cfg)?.value;
        line += &format!(" | {exact:.6e} {:.6e}", psi0_limit_beta_inf(r, c12));
        println!("{line}");
    }

    println!("\nr -> 0 at fixed beta");
    for beta in [10.0, 1e3, 1e5] {
        let small = psi0_closed(&Psi0Params::new(1e-6, beta, c12)?, &cfg)?.value;
        println!("  beta = {beta:>7}: {small:.10e}  exact {:.10e}  leading {:.10e}", psi0_limit_r0_exact(beta, c12)?, psi0_limit_r0(beta, c12));
    }
    Ok(())
}
