//! The regularized diagonal kernel `Psi_beta(r)`: a Coulomb-weighted
//! contraction of the leading six-dimensional resolvent kernel with a
//! Gaussian mollifier of width `beta` and the test function `exp(-x^2)`,
//! evaluated at distance `r` from the origin along the diagonal.
//!
//! With `s = sin r'`, `c = cos r'` and
//! `a = beta s^2 + c^2`, `b = 2 beta s r`, `d = 2 c r`,
//! `v = (b - d)/sqrt(2a)`, `w = (b + d)/sqrt(2a)`, `E = (beta + 1) r^2`:
//!
//! ```text
//! Psi = 2 c12 sqrt(pi beta) r^-2 int_0^{pi/2} cos r'
//!       * int_0^inf exp(-a t^2 - E) [cosh((b+d)t) - cosh((b-d)t)] t^-2 dt dr'
//!     = 2 c12 sqrt(pi beta) r^-2 int_0^{pi/2} cos r'
//!       * sqrt(a pi) [exp(w^2/2 - E) G(w) - exp(v^2/2 - E) G(v)] dr'
//! ```
//!
//! where `G(x) = sqrt(2) x F(x/sqrt(2)) - 1` and `F` is Dawson's integral.
//! Since `w^2/2 <= E` for every `r'`, the merged exponents never overflow.

use std::f64::consts::{FRAC_PI_2, PI, SQRT_2};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::quadrature::{integrate_1d, integrate_1d_points, integrate_2d_points, Interval, QuadConfig, QuadResult};
use crate::specfun::dawson_excess;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Psi0Params {
    pub r: f64,
    pub beta: f64,
    pub c12: f64,
}

impl Psi0Params {
    pub fn new(r: f64, beta: f64, c12: f64) -> Result<Self> {
        let p = Psi0Params { r, beta, c12 };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.r > 0.0) || !self.r.is_finite() {
            return Err(Error::InvalidConfig(format!("r must be finite and positive, got {}", self.r)));
        }
        if !(self.beta > 0.0) || !self.beta.is_finite() {
            return Err(Error::InvalidConfig(format!("beta must be finite and positive, got {}", self.beta)));
        }
        if !self.c12.is_finite() {
            return Err(Error::InvalidConfig("c12 must be finite".into()));
        }
        Ok(())
    }

    /// `2 c12 sqrt(pi beta) r^-2`, without the Gaussian factor.
    pub fn prefactor(&self) -> f64 {
        2.0 * self.c12 * (PI * self.beta).sqrt() / (self.r * self.r)
    }

    /// Merged Gaussian exponent `(beta + 1) r^2`.
    pub fn shift(&self) -> f64 {
        (self.beta + 1.0) * self.r * self.r
    }

    /// Angles where `a` crosses over from `cos^2` to `beta sin^2` dominance.
    fn breakpoints(&self) -> Vec<f64> {
        let mut pts = vec![0.0];
        for k in [0.3, 1.0, 3.0, 10.0] {
            let s = k / self.beta.sqrt();
            if s < 0.9 {
                pts.push(s.asin());
            }
        }
        pts.push(FRAC_PI_2);
        pts
    }
}

/// Substitution variables at angle `r'`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct VWPair {
    pub v: f64,
    pub w: f64,
    pub a: f64,
    pub b: f64,
    pub d: f64,
}

impl VWPair {
    /// `w^2 - v^2 = 2 b d / a`, without cancellation.
    pub fn w2_minus_v2(&self) -> f64 {
        2.0 * self.b * self.d / self.a
    }

    /// `v - w = -2 d / sqrt(2a)`, without cancellation.
    pub fn v_minus_w(&self) -> f64 {
        -SQRT_2 * self.d / self.a.sqrt()
    }
}

pub fn vw_at(rp: f64, params: &Psi0Params) -> Result<VWPair> {
    params.validate()?;
    if !(0.0..=FRAC_PI_2).contains(&rp) {
        return Err(Error::Precondition(format!("angle r' must lie in [0, pi/2], got {rp}")));
    }
    Ok(vw_unchecked(rp, params))
}

#[inline]
fn vw_unchecked(rp: f64, p: &Psi0Params) -> VWPair {
    let (s, c) = rp.sin_cos();
    let a = p.beta * s * s + c * c;
    let b = 2.0 * p.beta * s * p.r;
    let d = 2.0 * c * p.r;
    let q = (2.0 * a).sqrt();
    VWPair { v: (b - d) / q, w: (b + d) / q, a, b, d }
}

// h(w) - h(v) for h(x) = exp(x^2/2) G(x) = sum_{n>=1} x^(2n) / (2^n n! (2n-1)) - 1,
// with w^(2n) - v^(2n) = (w^2 - v^2) sum_k w^(2k) v^(2(n-1-k)). Valid for |v|, |w| < 1.
fn h_difference_series(vw: &VWPair) -> f64 {
    let w2 = vw.w * vw.w;
    let v2 = vw.v * vw.v;
    let delta = vw.w2_minus_v2();
    let mut sum = 0.0;
    // geometric part g_n = sum_{k<n} w2^k v2^(n-1-k), g_{n+1} = w2 g_n + v2^n
    let mut g = 1.0;
    let mut v2n = 1.0;
    let mut coef = 1.0;
    for n in 1..60 {
        coef /= 2.0 * n as f64;
        let term = delta * g * coef / (2 * n - 1) as f64;
        sum += term;
        if term.abs() <= 1e-17 * sum.abs() {
            break;
        }
        v2n *= v2;
        g = w2 * g + v2n;
    }
    sum
}

/// `sqrt(a pi) [exp(w^2/2 - E) G(w) - exp(v^2/2 - E) G(v)]`, the closed-form
/// `t`-integral at angle `r'` including the Gaussian factor `exp(-E)`.
pub fn psi0_bracket(vw: &VWPair, shift: f64) -> f64 {
    let diff = if vw.v.abs().max(vw.w.abs()) < 1.0 {
        (-shift).exp() * h_difference_series(vw)
    } else {
        let ew = (0.5 * vw.w * vw.w - shift).exp() * dawson_excess(vw.w);
        let ev = (0.5 * vw.v * vw.v - shift).exp() * dawson_excess(vw.v);
        ew - ev
    };
    (vw.a * PI).sqrt() * diff
}

/// Closed (Dawson) form of `Psi_beta(r)`, a 1-d quadrature over `r'`.
pub fn psi0_closed(params: &Psi0Params, cfg: &QuadConfig) -> Result<QuadResult> {
    params.validate()?;
    let shift = params.shift();
    let f = |rp: f64| {
        let vw = vw_unchecked(rp, params);
        psi0_bracket(&vw, shift) * rp.cos()
    };
    let r = integrate_1d_points(f, &params.breakpoints(), cfg)?;
    r.scaled(params.prefactor()).require_converged()
}

/// `exp(-a t^2 - shift) [cosh((b+d)t) - cosh((b-d)t)] / t^2`, evaluated as
/// `(1/2)(1 - e^{-2bt})(1 - e^{-2dt}) exp((b+d)t - a t^2 - shift) / t^2`.
///
/// Below `t = 1e-6 * scale`, with `scale = max((b+d)/(2a), 1/sqrt(a))`, the
/// analytic limit `2 b d exp(-shift)` is returned.
pub fn cosh_difference_integrand(t: f64, a: f64, b: f64, d: f64, shift: f64) -> f64 {
    let scale = ((b + d) / (2.0 * a)).max(1.0 / a.sqrt());
    if t < 1e-6 * scale {
        return 2.0 * b * d * (-shift).exp();
    }
    let e = (b + d) * t - a * t * t - shift;
    0.5 * (-(-2.0 * b * t).exp_m1()) * (-(-2.0 * d * t).exp_m1()) * e.exp() / (t * t)
}

/// Direct 2-d quadrature over `(r', t)` of the unreduced integral.
///
/// The inner `t` variable is rescaled per angle by
/// `L = max((b+d)/(2a), 1/sqrt(a))`, which places the Gaussian peak at unit
/// scale.
pub fn psi0_quad2d(params: &Psi0Params, cfg: &QuadConfig) -> Result<QuadResult> {
    params.validate()?;
    let shift = params.shift();
    let f = |rp: f64, u: f64| {
        let vw = vw_unchecked(rp, params);
        let l = ((vw.b + vw.d) / (2.0 * vw.a)).max(1.0 / vw.a.sqrt());
        l * cosh_difference_integrand(l * u, vw.a, vw.b, vw.d, shift) * rp.cos()
    };
    let r = integrate_2d_points(f, &params.breakpoints(), Interval::SemiInfinite(0.0), cfg)?;
    r.scaled(params.prefactor()).require_converged()
}

/// Leading small-`r` term of the `beta -> inf` limit: `c12 pi^2 r^-2 exp(-r^2)`.
pub fn psi0_limit_beta_inf(r: f64, c12: f64) -> f64 {
    c12 * PI * PI * (-r * r).exp() / (r * r)
}

/// `r -> 0` value at fixed `beta` to leading order in `1/beta`: `2 c12 pi^2 beta`.
pub fn psi0_limit_r0(beta: f64, c12: f64) -> f64 {
    2.0 * c12 * PI * PI * beta
}

/// Full `beta -> inf` limit of `Psi_beta(r)`:
/// `c12 pi r^-4 int_0^{pi/2} sin cos [exp(-r^2 (1 - cot)^2) - exp(-r^2 (1 + cot)^2)] dr'`.
pub fn psi0_limit_beta_inf_exact(r: f64, c12: f64, cfg: &QuadConfig) -> Result<QuadResult> {
    if !(r > 0.0) || !r.is_finite() {
        return Err(Error::InvalidConfig(format!("r must be finite and positive, got {r}")));
    }
    let r2 = r * r;
    let f = |rp: f64| {
        let (s, c) = rp.sin_cos();
        let cot = c / s;
        let lead = (-r2 * (1.0 - cot) * (1.0 - cot)).exp();
        if lead == 0.0 {
            return 0.0;
        }
        s * c * lead * (-(-4.0 * r2 * cot).exp_m1())
    };
    let res = integrate_1d_points(f, &[0.0, FRAC_PI_2 / 2.0, FRAC_PI_2], cfg)?;
    res.scaled(c12 * PI / (r2 * r2)).require_converged()
}

/// Exact `r -> 0` value at finite `beta`:
/// `4 pi c12 beta (asin k - k sqrt(1 - k^2)) / k^3`, `k^2 = (beta - 1)/beta`
/// (analytically continued for `beta < 1`).
pub fn psi0_limit_r0_exact(beta: f64, c12: f64) -> Result<f64> {
    if !(beta > 0.0) || !beta.is_finite() {
        return Err(Error::InvalidConfig(format!("beta must be finite and positive, got {beta}")));
    }
    let k2 = (beta - 1.0) / beta;
    // (asin k - k sqrt(1-k^2)) / k^3 = sum_n c_n k^(2n) with c_0 = 2/3; used near k = 0
    let ratio = if k2.abs() < 1e-3 {
        2.0 / 3.0 + k2 / 5.0 + 3.0 * k2 * k2 / 28.0
    } else if k2 > 0.0 {
        let k = k2.sqrt();
        (k.asin() - k * (1.0 - k2).sqrt()) / (k2 * k)
    } else {
        let kappa = (-k2).sqrt();
        (kappa * (1.0 - k2).sqrt() - kappa.asinh()) / (-k2 * kappa)
    };
    Ok(4.0 * PI * c12 * beta * ratio)
}

/// Taylor approximant in `v - w` of order 1, 2 or 3:
/// `-[(v-w)/w + (v-w)^2/2 + w (v-w)^3/6] exp(w^2/2 - E) sqrt(a pi)` in place of
/// the bracket, integrated against `cos r'` with the same prefactor.
///
/// Requires `sqrt(2 beta) r >= 3`.
pub fn psi0_taylor(order: u8, params: &Psi0Params, cfg: &QuadConfig) -> Result<QuadResult> {
    params.validate()?;
    if !(1..=3).contains(&order) {
        return Err(Error::Precondition(format!("Taylor order must be 1, 2 or 3, got {order}")));
    }
    let lhs = (2.0 * params.beta).sqrt() * params.r;
    if lhs < 3.0 {
        return Err(Error::Precondition(format!("Taylor approximant needs sqrt(2 beta) r >= 3, got {lhs:.4}")));
    }
    let shift = params.shift();
    let f = |rp: f64| {
        let vw = vw_unchecked(rp, params);
        let x = vw.v_minus_w();
        let mut poly = x / vw.w;
        if order >= 2 {
            poly += 0.5 * x * x;
        }
        if order >= 3 {
            poly += vw.w * x * x * x / 6.0;
        }
        -poly * (0.5 * vw.w * vw.w - shift).exp() * (vw.a * PI).sqrt() * rp.cos()
    };
    let r = integrate_1d_points(f, &params.breakpoints(), cfg)?;
    r.scaled(params.prefactor()).require_converged()
}

/// Integral of `cos^2` over `[0, pi/2]`, used by the order-1 limit.
pub fn cos_squared_quarter_period(cfg: &QuadConfig) -> Result<f64> {
    Ok(integrate_1d(|x| x.cos().powi(2), 0.0, FRAC_PI_2, cfg)?.require_converged()?.value)
}
