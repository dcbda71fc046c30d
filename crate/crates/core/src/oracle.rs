//! Reference evaluations used to cross-check the production routines.
//!
//! Nothing here calls into `specfun`, `quadrature` or `contraction`. The
//! integration rules (tanh-sinh, truncated trapezoid) differ from the
//! Gauss-Kronrod rule used in production so that agreement is a genuine test.
//! These routines favour robustness over speed.

use std::f64::consts::{FRAC_PI_2, PI};

/// Tanh-sinh quadrature of `f` over a finite `[a, b]`.
///
/// Endpoints are never evaluated, so integrable endpoint singularities are
/// allowed. Refinement halves the step until two successive levels agree to
/// `rel_tol`.
pub fn tanh_sinh<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, rel_tol: f64) -> f64 {
    assert!(a < b, "tanh_sinh requires a < b");
    let half = 0.5 * (b - a);
    let mid = 0.5 * (a + b);
    let t_max = 6.5;

    // contribution of the nodes +-t; the node offset from the nearest endpoint
    // is computed as half * exp(-u) / cosh(u) to keep it exact near the ends
    let pair = |t: f64| -> f64 {
        let u = FRAC_PI_2 * t.sinh();
        let w = FRAC_PI_2 * t.cosh() / (u.cosh() * u.cosh());
        if w == 0.0 || !w.is_finite() {
            return 0.0;
        }
        let gap = half * (-u).exp() / u.cosh();
        if gap <= 0.0 {
            return 0.0;
        }
        let xr = b - gap;
        let xl = a + gap;
        let mut s = 0.0;
        if xr > a && xr < b {
            s += f(xr);
        }
        if xl > a && xl < b {
            s += f(xl);
        }
        w * s
    };

    let mut h = 1.0;
    let mut sum = FRAC_PI_2 * f(mid);
    let mut k = 1;
    while k as f64 * h <= t_max {
        sum += pair(k as f64 * h);
        k += 1;
    }
    let mut prev = sum * h * half;
    for level in 1..=14 {
        h *= 0.5;
        let mut k = 1;
        while k as f64 * h <= t_max {
            sum += pair(k as f64 * h);
            k += 2;
        }
        let cur = sum * h * half;
        if level >= 4 && (cur - prev).abs() <= rel_tol * cur.abs() {
            return cur;
        }
        prev = cur;
    }
    prev
}

/// Truncated trapezoid rule on `[0, upper]` with `n` equal steps.
///
/// Spectrally accurate for integrands analytic in a strip that decay to
/// negligible size by `upper`.
pub fn trapezoid_half_line<F: Fn(f64) -> f64>(f: F, upper: f64, n: usize) -> f64 {
    let h = upper / n as f64;
    let mut s = 0.5 * (f(0.0) + f(upper));
    for i in 1..n {
        s += f(i as f64 * h);
    }
    s * h
}

/// `K_nu(x) = int_0^inf exp(-x cosh t) cosh(nu t) dt` by the trapezoid rule.
pub fn bessel_k_integral(nu: f64, x: f64) -> f64 {
    // exp(-x cosh t) < 1e-320 once x cosh t > 740
    let upper = (740.0 / x).max(1.0).acosh() + 1.0;
    let n = ((upper / 0.02).ceil() as usize).max(200);
    trapezoid_half_line(|t| (nu * t - x * t.cosh()).exp() * 0.5 + (-nu * t - x * t.cosh()).exp() * 0.5, upper, n)
}

/// Dawson's integral as `int_0^x exp((t - x)(t + x)) dt`.
pub fn dawson_integral(x: f64) -> f64 {
    if x == 0.0 {
        return 0.0;
    }
    let ax = x.abs();
    // integrand is exp(-(x-t)(x+t)); below t = x - 40/x it is < e^-40
    let lo = (ax - 40.0 / ax).max(0.0);
    let v = tanh_sinh(|t| ((t - ax) * (t + ax)).exp(), lo, ax, 1e-15);
    v.copysign(x)
}

/// Alternating Maclaurin series `sum (-1)^n 2^n x^(2n+1) / (2n+1)!!`, only
/// trustworthy for `|x| <= 2`.
pub fn dawson_maclaurin(x: f64) -> f64 {
    let mut term = x;
    let mut sum = x;
    for n in 1..200 {
        term *= -2.0 * x * x / (2 * n + 1) as f64;
        sum += term;
        if term.abs() < 1e-18 * sum.abs() {
            break;
        }
    }
    sum
}

/// `V(-1/2, x) = (2/pi) exp(-x^2/4) int_0^inf exp(-t^2/2) sinh(x t) / t dt`.
pub fn pcf_v_mhalf_integral(x: f64) -> f64 {
    if x == 0.0 {
        return 0.0;
    }
    let q = 0.25 * x * x;
    // exp(-x^2/4 - t^2/2) sinh(xt) = (exp(q - (t-x)^2/2) - exp(q - (t+x)^2/2)) / 2
    let g = |t: f64| {
        if t < 1e-8 {
            // sinh(xt)/t -> x
            return x * (-q - 0.5 * t * t).exp();
        }
        let e1 = q - 0.5 * (t - x) * (t - x);
        let e2 = q - 0.5 * (t + x) * (t + x);
        0.5 * (e1.exp() - e2.exp()) / t
    };
    let upper = x.abs() + 40.0;
    2.0 / PI * tanh_sinh(g, 0.0, upper, 1e-15)
}

/// `erf(x) = 2/sqrt(pi) int_0^x exp(-t^2) dt`.
pub fn erf_integral(x: f64) -> f64 {
    if x == 0.0 {
        return 0.0;
    }
    let ax = x.abs().min(30.0);
    let v = 2.0 / PI.sqrt() * tanh_sinh(|t| (-t * t).exp(), 0.0, ax, 1e-15);
    v.copysign(x)
}

/// Craig's form `erfc(x) = (2/pi) int_0^(pi/2) exp(-x^2 / sin^2 t) dt`, `x >= 0`.
pub fn erfc_craig(x: f64) -> f64 {
    assert!(x >= 0.0, "erfc_craig requires x >= 0");
    if x == 0.0 {
        return 1.0;
    }
    let x2 = x * x;
    2.0 / PI * tanh_sinh(|t| (-x2 / (t.sin() * t.sin())).exp(), 0.0, FRAC_PI_2, 1e-15)
}

/// `E_1(x) = int_0^inf exp(-x e^u) du` for `x > 0`.
pub fn e1_integral(x: f64) -> f64 {
    let upper = (745.0 / x).ln().max(1.0);
    tanh_sinh(|u| (-x * u.exp()).exp(), 0.0, upper, 1e-15)
}

/// `E_1` by its convergent series `-gamma - ln x + sum (-1)^(n+1) x^n / (n n!)`.
pub fn e1_series(x: f64) -> f64 {
    let gamma = 0.577_215_664_901_532_9;
    let mut term = 1.0;
    let mut sum = 0.0;
    for n in 1..400 {
        term *= x / n as f64;
        let t = term / n as f64;
        sum += if n % 2 == 1 { t } else { -t };
        if t < 1e-18 * sum.abs() {
            break;
        }
    }
    -gamma - x.ln() + sum
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tanh_sinh_polynomial_and_singular() {
        let v = tanh_sinh(|x| x * x, 0.0, 3.0, 1e-14);
        assert!((v - 9.0).abs() < 1e-12);
        // integrable endpoint singularity
        let v = tanh_sinh(|x| 1.0 / x.sqrt(), 0.0, 1.0, 1e-14);
        assert!((v - 2.0).abs() < 1e-12);
    }

    #[test]
    fn oracles_agree_among_themselves() {
        for &x in &[0.1, 0.7, 1.5] {
            let a = dawson_integral(x);
            let b = dawson_maclaurin(x);
            assert!(((a - b) / b).abs() < 1e-13, "x = {x}");
        }
        for &x in &[0.01, 0.5, 2.0] {
            let a = e1_integral(x);
            let b = e1_series(x);
            assert!(((a - b) / b).abs() < 1e-12, "x = {x}");
        }
    }

    #[test]
    fn erfc_oracle_complements_erf() {
        for &x in &[0.0, 0.3, 1.0, 2.0] {
            assert!((erfc_craig(x) + erf_integral(x) - 1.0).abs() < 1e-14, "x = {x}");
        }
        // erfc(5) = 1.5374597944280349e-12
        assert!((erfc_craig(5.0) / 1.537_459_794_428_034_9e-12 - 1.0).abs() < 1e-12);
    }

    #[test]
    fn bessel_integral_known_value() {
        assert!((bessel_k_integral(0.0, 1.0) - 0.421_024_438_240_708_3).abs() < 1e-15);
        assert!((bessel_k_integral(1.0, 1.0) - 0.601_907_230_197_234_6).abs() < 1e-15);
    }
}
