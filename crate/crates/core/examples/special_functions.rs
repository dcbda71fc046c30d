//! Tabulates the special functions next to independent quadrature oracles.
//!
//! Run with `cargo run --example special_functions`.

use contracted_kernels::{oracle, specfun};

fn main() -> contracted_kernels::Result<()> {
    println!("{:>6} {:>22} {:>10}", "x", "dawson(x)", "rel.err");
    for x in [0.1, 0.5, 1.0, 2.0, 5.0, 20.0] {
        let f = specfun::dawson(x);
        println!("{x:>6} {f:>22.16e} {:>10.1e}", rel(f, oracle::dawson_integral(x)));
    }

    println!("\n{:>6} {:>22} {:>22} {:>22}", "x", "K0", "K1", "V(-1/2,x)");
    for x in [0.01, 0.5, 2.0, 10.0] {
        println!(
            "{x:>6} {:>22.16e} {:>22.16e} {:>22.16e}",
            specfun::bessel_k0(x)?,
            specfun::bessel_k1(x)?,
            specfun::pcf_v_mhalf(x)?
        );
    }

    // erfc is checked against Craig's form, E1 against its defining integral
    println!("\n{:>6} {:>10} {:>10}", "x", "erfc err", "E1 err");
    for x in [0.2, 1.0, 3.0, 8.0] {
        let e_erfc = rel(specfun::erfc(x), oracle::erfc_craig(x));
        let e_e1 = rel(specfun::exp_integral_e1(x)?, oracle::e1_integral(x));
        println!("{x:>6} {e_erfc:>10.1e} {e_e1:>10.1e}");
    }
    Ok(())
}

fn rel(a: f64, b: f64) -> f64 {
    ((a - b) / b).abs()
}
