use std::f64::consts::PI;

use crate::error::{domain, Error, Result};
use crate::quadrature::{integrate_1d, integrate_semi_infinite, QuadConfig, QuadResult};
use crate::specfun::bessel_k0_scaled;

/// Coefficient of `ln rho` in the small-distance expansion of the
/// two-dimensional contracted Coulomb kernel, `1/(2 sqrt(2 pi))`.
pub fn example2_log_coefficient() -> f64 {
    1.0 / (2.0 * (2.0 * PI).sqrt())
}

/// `-(1/(4 sqrt(2 pi))) exp(rho^2/4) K_0(rho^2/4)`.
///
/// Uses the scaled Bessel function, so large `rho` does not overflow.
pub fn contracted_coulomb_2d_closed(rho: f64) -> Result<f64> {
    if !(rho > 0.0) || !rho.is_finite() {
        return Err(domain("contracted_coulomb_2d_closed", format!("requires finite rho > 0, got {rho}")));
    }
    let x = 0.25 * rho * rho;
    if x == 0.0 {
        return Err(domain("contracted_coulomb_2d_closed", format!("rho = {rho} underflows rho^2/4")));
    }
    Ok(-bessel_k0_scaled(x)? / (4.0 * (2.0 * PI).sqrt()))
}

/// Integrand `-(1/(4 pi)) sqrt(pi/(1+2t^2)) exp(-rho^2 t^2)` of the
/// contracted kernel, before folding `t -> |t|`.
pub fn example2_integrand(t: f64, rho: f64) -> f64 {
    -(PI / (1.0 + 2.0 * t * t)).sqrt() * (-rho * rho * t * t).exp() / (4.0 * PI)
}

/// Quadrature of the contracted kernel over `t in (-inf, inf)`, folded to
/// twice the half-line integral. The half line is rescaled by
/// `max(1, 1/rho)` so the Gaussian decay sits at unit scale.
pub fn contracted_coulomb_2d_quad(rho: f64, cfg: &QuadConfig) -> Result<QuadResult> {
    if !(rho > 0.0) || !rho.is_finite() {
        return Err(domain("contracted_coulomb_2d_quad", format!("requires finite rho > 0, got {rho}")));
    }
    let scale = (1.0 / rho).max(1.0);
    let r = integrate_semi_infinite(|u| scale * example2_integrand(scale * u, rho), 0.0, cfg)?;
    r.scaled(2.0).require_converged()
}

/// `I_beta(d) = 2 int_0^sqrt(beta/2) sqrt(pi/(1 + 2(1 - 1/beta) u^2)) exp(-u^2 d^2) du`,
/// with `d = |a - b|`.
pub fn appendix_i_beta(d: f64, beta: f64, cfg: &QuadConfig) -> Result<QuadResult> {
    if !(d >= 0.0) || !d.is_finite() {
        return Err(domain("appendix_i_beta", format!("requires finite d >= 0, got {d}")));
    }
    if !(beta > 1.0) || !beta.is_finite() {
        return Err(Error::Precondition(format!("appendix_i_beta requires beta > 1, got {beta}")));
    }
    let c = 2.0 * (1.0 - 1.0 / beta);
    let upper = (0.5 * beta).sqrt();
    let r = integrate_1d(|u| (PI / (1.0 + c * u * u)).sqrt() * (-u * u * d * d).exp(), 0.0, upper, cfg)?;
    r.scaled(2.0).require_converged()
}

/// `beta -> inf` limit of [`appendix_i_beta`]: `sqrt(pi/2) exp(d^2/4) K_0(d^2/4)`.
pub fn appendix_i_beta_limit(d: f64) -> Result<f64> {
    if !(d > 0.0) {
        return Err(domain("appendix_i_beta_limit", format!("requires d > 0, got {d}")));
    }
    Ok((PI / 2.0).sqrt() * bessel_k0_scaled(0.25 * d * d)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle;

    fn cfg() -> QuadConfig {
        QuadConfig { rel_tol: 1e-12, abs_tol: 1e-300, max_evals: 200_000 }
    }

    #[test]
    fn closed_vs_quadrature() {
        for &rho in &[0.1, 0.5, 1.0, 2.0] {
            let c = contracted_coulomb_2d_closed(rho).unwrap();
            let q = contracted_coulomb_2d_quad(rho, &cfg()).unwrap().value;
            assert!(((c - q) / c).abs() < 1e-9, "rho = {rho}: {c} vs {q}");
        }
    }

    #[test]
    fn closed_form_at_one_against_tanh_sinh() {
        let c = contracted_coulomb_2d_closed(1.0).unwrap();
        let half = oracle::tanh_sinh(|t| (PI / (1.0 + 2.0 * t * t)).sqrt() * (-t * t).exp(), 0.0, 40.0, 1e-15);
        let o = -2.0 * half / (4.0 * PI);
        assert!(((c - o) / o).abs() < 1e-12);
    }

    #[test]
    fn integrand_at_origin() {
        assert!((example2_integrand(0.0, 0.7) + PI.sqrt() / (4.0 * PI)).abs() < 1e-16);
    }

    #[test]
    fn large_rho_decay() {
        for &rho in &[5.0, 10.0] {
            let v = contracted_coulomb_2d_quad(rho, &cfg()).unwrap().value;
            // -(1/(4pi)) * sqrt(pi) * sqrt(pi)/rho is the leading large-rho term
            assert!(v.abs() <= 0.3 / rho, "rho = {rho}: {v}");
        }
        assert!(contracted_coulomb_2d_closed(1e3).unwrap().is_finite());
    }

    #[test]
    fn small_rho_log_asymptote() {
        // value = (1/(2 sqrt(2 pi))) (ln rho + (gamma - ln 8)/2) + O(rho^2 ln rho)
        let k = example2_log_coefficient();
        for &rho in &[1e-4, 1e-3] {
            let v = contracted_coulomb_2d_closed(rho).unwrap();
            let asym = k * (rho.ln() + 0.5 * (crate::specfun::EULER_GAMMA - 8f64.ln()));
            assert!((v - asym).abs() < rho * rho * rho.ln().abs(), "rho = {rho}");
        }
        let rho = 1e-150;
        let ratio = contracted_coulomb_2d_closed(rho).unwrap() / (k * rho.ln());
        assert!((ratio - 1.0).abs() < 0.01);
    }

    #[test]
    fn domain_errors() {
        assert!(contracted_coulomb_2d_closed(0.0).is_err());
        assert!(contracted_coulomb_2d_quad(-1.0, &cfg()).is_err());
        assert!(appendix_i_beta(1.0, 1.0, &cfg()).is_err());
    }

    #[test]
    fn i_beta_approaches_limit() {
        let lim = appendix_i_beta_limit(1.0).unwrap();
        let mut prev = f64::INFINITY;
        for &beta in &[1e2, 1e3, 1e4, 1e5] {
            let v = appendix_i_beta(1.0, beta, &cfg()).unwrap().value;
            let e = ((v - lim) / lim).abs();
            assert!(e < prev, "beta = {beta}");
            prev = e;
        }
        assert!(prev < 5e-3);
    }

    #[test]
    fn i_beta_at_zero_distance() {
        // 2 int_0^U sqrt(pi / (1 + 2k u^2)) du = 2 sqrt(pi) asinh(sqrt(2k) U) / sqrt(2k)
        let mut prev = 0.0;
        for &beta in &[1e2, 1e3, 1e4] {
            let k: f64 = 1.0 - 1.0 / beta;
            let u = (beta / 2.0).sqrt();
            let exact = 2.0 * PI.sqrt() * ((2.0 * k).sqrt() * u).asinh() / (2.0 * k).sqrt();
            let v = appendix_i_beta(0.0, beta, &cfg()).unwrap().value;
            assert!(((v - exact) / exact).abs() < 1e-10);
            assert!(v > prev);
            prev = v;
        }
    }
}
