//! Two-dimensional contracted Coulomb kernel: Bessel closed form against
//! quadrature, its logarithmic small-distance behaviour, and the
//! mollified one-dimensional integral converging to its limit.

use contracted_kernels::contraction::{
    appendix_i_beta, appendix_i_beta_limit, contracted_coulomb_2d_closed, contracted_coulomb_2d_quad, example2_log_coefficient,
};
use contracted_kernels::quadrature::QuadConfig;

fn main() -> contracted_kernels::Result<()> {
    let cfg = QuadConfig::new(1e-12, 1e-300, 400_000)?;

    println!("{:>8} {:>22} {:>10} {:>12}", "rho", "closed", "quad err", "ratio");
    for rho in [1e-6, 1e-4, 1e-2, 0.1, 0.5] {
        let closed = contracted_coulomb_2d_closed(rho)?;
        let quad = contracted_coulomb_2d_quad(rho, &cfg)?.value;
        // leading behaviour is example2_log_coefficient() * ln(rho)
        let ratio = closed / (example2_log_coefficient() * rho.ln());
        println!("{rho:>8} {closed:>22.15e} {:>10.1e} {ratio:>12.6}", ((quad - closed) / closed).abs());
    }

    let d = 0.7;
    let limit = appendix_i_beta_limit(d)?;
    println!("\nd = {d}, limit {limit:.12}");
    for beta in [10.0, 100.0, 1e3, 1e4, 1e5] {
        let v = appendix_i_beta(d, beta, &cfg)?.value;
        println!("beta {beta:>8}: {v:.12}  gap {:.3e}", limit - v);
    }
    Ok(())
}
