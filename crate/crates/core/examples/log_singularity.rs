//! The monopole term of the contracted second-order kernel diverges like
//! `ln |a|`. Its closed form is checked against quadrature of its two pieces
//! and the log coefficient is recovered by a least-squares fit.

use std::f64::consts::PI;

use contracted_kernels::asymptotics::{fit_expansion, ExpansionBasis, ExpansionTerm, RadialSamples};
use contracted_kernels::contraction::{i1_asymptotic, i1_log_coefficient, monopole_inner, monopole_outer};
use contracted_kernels::quadrature::QuadConfig;

fn main() -> contracted_kernels::Result<()> {
    let cfg = QuadConfig::new(1e-13, 1e-300, 200_000)?;
    let c12 = 1.0;

    for a in [1e-3, 0.1, 1.0, 2.5] {
        let closed = i1_asymptotic(a, c12)?;
        let pieces = 4.0 * PI.powi(3) * c12 * (monopole_inner(a, &cfg)?.value + monopole_outer(a, &cfg)?.value);
        println!("|a| = {a:<6} {closed:.14e}  rel.diff {:.1e}", ((closed - pieces) / closed).abs());
    }

    let samples = RadialSamples::from_fn(|a| i1_asymptotic(a, c12).unwrap(), 1e-6, 1e-3, 40)?;
    let basis = ExpansionBasis::parse("ln,1,r,r^2")?;
    let fit = fit_expansion(&samples, &basis)?;
    let k = basis.position(ExpansionTerm::log(0.0)).expect("ln term");
    println!(
        "fitted ln coefficient {:.10} +- {:.1e}, expected {:.10}",
        fit.coefficients[k],
        fit.standard_errors[k],
        i1_log_coefficient(c12)
    );
    Ok(())
}
