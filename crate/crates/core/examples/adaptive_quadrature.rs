//! Adaptive Gauss-Kronrod on finite, semi-infinite, infinite and 2-d ranges.

use std::f64::consts::PI;

use contracted_kernels::quadrature::{integrate, integrate_2d, Interval, QuadConfig, Rectangle};

fn main() -> contracted_kernels::Result<()> {
    let cfg = QuadConfig::new(1e-12, 1e-300, 200_000)?;

    let cases: [(&str, Interval, fn(f64) -> f64, f64); 3] = [
        ("sqrt(x) on [0,1]", Interval::Finite(0.0, 1.0), |x| x.sqrt(), 2.0 / 3.0),
        ("exp(-x)/(1+x) on [0,inf)", Interval::SemiInfinite(0.0), |x| (-x).exp() / (1.0 + x), 0.596_347_362_323_194_1),
        ("exp(-x^2) on R", Interval::Infinite, |x| (-x * x).exp(), PI.sqrt()),
    ];
    for (name, range, f, exact) in cases {
        let r = integrate(f, range, &cfg)?.require_converged()?;
        println!("{name:<26} {:.16e}  err {:.1e}  est {:.1e}  evals {}", r.value, (r.value - exact).abs(), r.error_estimate, r.evaluations);
    }

    let rect = Rectangle { x: Interval::Finite(0.0, 1.0), y: Interval::SemiInfinite(0.0) };
    let r = integrate_2d(|x, y| (-(1.0 + x) * y).exp(), rect, &cfg)?.require_converged()?;
    println!("{:<26} {:.16e}  err {:.1e}", "exp(-(1+x)y) 2-d", r.value, (r.value - 2f64.ln()).abs());
    Ok(())
}
