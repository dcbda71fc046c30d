use std::f64::consts::PI;

use crate::error::{domain, Result};
use crate::kernels::Vec3;
use crate::quadrature::{integrate_1d, integrate_semi_infinite, QuadConfig, QuadResult};
use crate::specfun::{erf, exp_integral_e1};

/// `4 pi^3 c12 [(sqrt(pi)/(2a)) erf(a) + E_1(a^2)/2]`, the monopole part of
/// the contracted second-order term as a function of `a = |a|`.
pub fn i1_asymptotic(a_norm: f64, c12: f64) -> Result<f64> {
    if !(a_norm > 0.0) || !a_norm.is_finite() {
        return Err(domain("i1_asymptotic", format!("requires finite a > 0, got {a_norm}")));
    }
    let a2 = a_norm * a_norm;
    if a2 == 0.0 {
        return Err(domain("i1_asymptotic", format!("a = {a_norm} underflows a^2")));
    }
    let erf_part = PI.sqrt() / (2.0 * a_norm) * erf(a_norm);
    Ok(4.0 * PI.powi(3) * c12 * (erf_part + 0.5 * exp_integral_e1(a2)?))
}

/// Coefficient of `ln |a|` in [`i1_asymptotic`]: `-4 pi^3 c12`.
pub fn i1_log_coefficient(c12: f64) -> f64 {
    -4.0 * PI.powi(3) * c12
}

/// Smooth remainder `4 exp(-|2b - a|^2) exp(-|b|^2)`.
pub fn i2_smooth(a: Vec3, b: Vec3) -> f64 {
    4.0 * (-(2.0 * b - a).norm2() - b.norm2()).exp()
}

/// `(1/a) int_0^a exp(-s^2) ds`, the first monopole piece by quadrature.
pub fn monopole_inner(a_norm: f64, cfg: &QuadConfig) -> Result<QuadResult> {
    if !(a_norm > 0.0) {
        return Err(domain("monopole_inner", format!("requires a > 0, got {a_norm}")));
    }
    Ok(integrate_1d(|s| (-s * s).exp(), 0.0, a_norm, cfg)?.require_converged()?.scaled(1.0 / a_norm))
}

/// `int_a^inf exp(-s^2)/s ds`, the second monopole piece by quadrature.
pub fn monopole_outer(a_norm: f64, cfg: &QuadConfig) -> Result<QuadResult> {
    if !(a_norm > 0.0) {
        return Err(domain("monopole_outer", format!("requires a > 0, got {a_norm}")));
    }
    // s = a e^u removes the 1/s scale
    integrate_semi_infinite(|u| (-(a_norm * u.exp()).powi(2)).exp(), 0.0, cfg)?.require_converged()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle;
    use crate::specfun::EULER_GAMMA;

    fn cfg() -> QuadConfig {
        QuadConfig { rel_tol: 1e-13, abs_tol: 1e-300, max_evals: 100_000 }
    }

    #[test]
    fn value_at_one() {
        let v = i1_asymptotic(1.0, 1.0).unwrap();
        let o = 4.0 * PI.powi(3) * (PI.sqrt() / 2.0 * oracle::erf_integral(1.0) + 0.5 * oracle::e1_integral(1.0));
        assert!(((v - o) / o).abs() < 1e-12);
    }

    #[test]
    fn small_a_expansion() {
        // (sqrt(pi)/(2a)) erf(a) = 1 - a^2/3 + ..., E1(a^2)/2 = -gamma/2 - ln a + a^2/2 + ...
        for &a in &[1e-4f64, 1e-3] {
            let v = i1_asymptotic(a, 1.0).unwrap();
            let lead = -4.0 * PI.powi(3) * (a.ln() + 0.5 * EULER_GAMMA - 1.0);
            assert!((v - lead).abs() < 4.0 * PI.powi(3) * a * a, "a = {a}");
        }
        assert!(i1_asymptotic(0.0, 1.0).is_err());
    }

    #[test]
    fn monopole_split_matches_special_functions() {
        for &a in &[1e-3, 0.1, 0.5, 1.0, 3.0] {
            let inner = monopole_inner(a, &cfg()).unwrap().value;
            let outer = monopole_outer(a, &cfg()).unwrap().value;
            let e_in = PI.sqrt() / (2.0 * a) * erf(a);
            let e_out = 0.5 * exp_integral_e1(a * a).unwrap();
            assert!(((inner - e_in) / e_in).abs() < 1e-10, "a = {a}");
            assert!(((outer - e_out) / e_out).abs() < 1e-10, "a = {a}");
        }
    }

    #[test]
    fn i2_values() {
        assert_eq!(i2_smooth(Vec3::ZERO, Vec3::ZERO), 4.0);
        let b = Vec3::new(0.3, -0.2, 0.5);
        assert!((i2_smooth(2.0 * b, b) - 4.0 * (-b.norm2()).exp()).abs() < 1e-15);
    }

    #[test]
    fn i2_derivatives_bounded_near_diagonal() {
        let h = 1e-4;
        for &t in &[-0.1, 0.0, 0.1] {
            let b = Vec3::new(0.2 + t, 0.1, 0.0);
            let a = b;
            for axis in 0..3 {
                let mut e = Vec3::ZERO;
                e.0[axis] = h;
                let d1 = (i2_smooth(a + e, b) - i2_smooth(a - e, b)) / (2.0 * h);
                let d2 = (i2_smooth(a + e, b) - 2.0 * i2_smooth(a, b) + i2_smooth(a - e, b)) / (h * h);
                assert!(d1.abs() < 16.0 && d2.abs() < 64.0);
            }
        }
    }
}
