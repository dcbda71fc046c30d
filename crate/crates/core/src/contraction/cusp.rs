//! Monte Carlo check of the linear cusp term of the zero-angular-momentum
//! projection of the contracted kernel
//!
//! ```text
//! Psi(x) = int_{R^6} c12 / |x - y|^4 * f(y1, y2) / |y1 - y2| dy
//! ```
//!
//! with source `f = delta_{b,beta}(y1) phi(y2)` (direct) or its swap
//! (exchange), `phi(x) = exp(-|x|^2)`. In centre-of-mass coordinates
//! `x = (z1, z2)` the average over directions of `z1` at `|z1| = rho` has the
//! closed form
//!
//! ```text
//! <|x - y|^-4> = 1 / ((q^2 + (s - rho)^2) (q^2 + (s + rho)^2))
//! ```
//!
//! with `s = |y1 - y2|/sqrt(2)` and `q = |(y1 + y2)/sqrt(2) - z2|`, so each
//! sample of `y` contributes to every `rho` at once. The slope of the
//! averaged kernel in `rho` is compared with
//! `-2 pi^3 c12 (1/sqrt(2)) phi(z2/sqrt(2)) delta_{b,beta}(z2/sqrt(2))`.

use std::f64::consts::{FRAC_1_SQRT_2, PI};

use rand::{Rng, RngCore};
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::kernels::{from_center_of_mass, gaussian_bump, Vec3};
use crate::quadrature::{mc_integrate_many, unit_vector, MCResult, Sampler};

/// Default `|z1|` grid for the slope fit.
pub const DEFAULT_CUSP_RHOS: [f64; 6] = [0.002, 0.004, 0.006, 0.008, 0.010, 0.012];

/// Which particle carries the mollifier.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum SourceSlot {
    Direct,
    Exchange,
}

/// `1 / ((q^2 + (s - rho)^2) (q^2 + (s + rho)^2))`: the average of
/// `(|z1 - u|^2 + q^2)^-2` over directions of `z1`, `|z1| = rho`, `|u| = s`.
pub fn direction_averaged_kernel(s: f64, q: f64, rho: f64) -> f64 {
    let q2 = q * q;
    1.0 / ((q2 + (s - rho) * (s - rho)) * (q2 + (s + rho) * (s + rho)))
}

/// `(1/sqrt(2)) phi(z2/sqrt(2)) delta_{b,beta}(z2/sqrt(2))`, the cusp
/// coefficient in units of `2 pi^3 c12` and up to sign.
pub fn cusp_coefficient(b: Vec3, beta: f64, z2: Vec3) -> f64 {
    let x0 = FRAC_1_SQRT_2 * z2;
    FRAC_1_SQRT_2 * (-x0.norm2()).exp() * gaussian_bump((x0 - b).norm2(), beta, 3)
}

/// Predicted slope of the averaged kernel in `|z1|`.
pub fn cusp_slope_predicted(b: Vec3, beta: f64, z2: Vec3, c12: f64) -> f64 {
    -2.0 * PI.powi(3) * c12 * cusp_coefficient(b, beta, z2)
}

// (s, q) of a 6-d point relative to the diagonal point with centre of mass z2
#[inline]
fn s_q(y: &[f64], z2: Vec3) -> (f64, f64) {
    let mut s2 = 0.0;
    let mut q2 = 0.0;
    for i in 0..3 {
        let rel = (y[i] - y[i + 3]) * FRAC_1_SQRT_2;
        let cm = (y[i] + y[i + 3]) * FRAC_1_SQRT_2 - z2.0[i];
        s2 += rel * rel;
        q2 += cm * cm;
    }
    (s2.sqrt(), q2.sqrt())
}

/// Mixture proposal on `R^6`: the Gaussian source, a cone around the
/// singular diagonal point with density `~ 1/(R^4 s)`, and one half-disc
/// around each ring singularity `(s, q) = (rho_k, 0)`.
struct CuspSampler {
    z2: Vec3,
    mean: [f64; 6],
    sigma: [f64; 6],
    cone_radius: f64,
    rhos: Vec<f64>,
    weights: [f64; 3],
}

impl CuspSampler {
    fn new(b: Vec3, beta: f64, z2: Vec3, slot: SourceSlot, rhos: &[f64]) -> Self {
        let s_delta = (0.5 / beta).sqrt();
        let s_phi = FRAC_1_SQRT_2;
        let (m1, sg1, m2, sg2) = match slot {
            SourceSlot::Direct => (b, s_delta, Vec3::ZERO, s_phi),
            SourceSlot::Exchange => (Vec3::ZERO, s_phi, b, s_delta),
        };
        let mut mean = [0.0; 6];
        let mut sigma = [0.0; 6];
        for i in 0..3 {
            mean[i] = m1.0[i];
            mean[i + 3] = m2.0[i];
            sigma[i] = sg1;
            sigma[i + 3] = sg2;
        }
        CuspSampler { z2, mean, sigma, cone_radius: 3.0 * s_delta.min(s_phi), rhos: rhos.to_vec(), weights: [0.4, 0.3, 0.3] }
    }

    fn place(&self, s: f64, q: f64, rng: &mut dyn RngCore, out: &mut [f64]) {
        let u = unit_vector(rng);
        let v = unit_vector(rng);
        let rel = Vec3(u);
        let cm = self.z2 + q * Vec3(v);
        let (y1, y2) = from_center_of_mass(s * rel, cm);
        out[..3].copy_from_slice(&y1.0);
        out[3..].copy_from_slice(&y2.0);
    }
}

impl Sampler for CuspSampler {
    fn dim(&self) -> usize {
        6
    }

    fn draw(&self, rng: &mut dyn RngCore, out: &mut [f64]) {
        let u: f64 = rng.random();
        if u < self.weights[0] {
            for i in 0..6 {
                let z: f64 = rng.sample(StandardNormal);
                out[i] = self.mean[i] + self.sigma[i] * z;
            }
        } else if u < self.weights[0] + self.weights[1] {
            let r = self.cone_radius * rng.random::<f64>();
            let th = rng.random::<f64>().cbrt().asin();
            self.place(r * th.cos(), r * th.sin(), rng, out);
        } else {
            let k = ((rng.random::<f64>() * self.rhos.len() as f64) as usize).min(self.rhos.len() - 1);
            let rho = self.rhos[k];
            let d = rho * rng.random::<f64>();
            let ph = PI * rng.random::<f64>();
            self.place(rho + d * ph.cos(), d * ph.sin(), rng, out);
        }
    }

    fn density(&self, y: &[f64]) -> f64 {
        let mut e = 0.0;
        let mut norm = 1.0;
        for i in 0..6 {
            let z = (y[i] - self.mean[i]) / self.sigma[i];
            e += 0.5 * z * z;
            norm *= self.sigma[i] * (2.0 * PI).sqrt();
        }
        let mut p = self.weights[0] * (-e).exp() / norm;
        let (s, q) = s_q(y, self.z2);
        let r = s.hypot(q);
        let shell = 16.0 * PI * PI;
        if r < self.cone_radius && s > 0.0 {
            p += self.weights[1] * 3.0 / (shell * self.cone_radius * r.powi(4) * s);
        }
        let w_ring = self.weights[2] / self.rhos.len() as f64;
        for &rho in &self.rhos {
            let d = (s - rho).hypot(q);
            if d < rho && d > 0.0 && q > 0.0 {
                p += w_ring / (PI * rho * d * shell * s * s * q * q);
            }
        }
        p
    }
}

/// Outcome of [`cusp_expansion_check`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CuspCheck {
    pub z1_norms: Vec<f64>,
    /// Averaged kernel at each `|z1|`.
    pub values: Vec<MCResult>,
    /// Averaged kernel at `z1 = 0`.
    pub at_origin: MCResult,
    /// Least-squares slope and intercept, each estimated per sample.
    pub slope: MCResult,
    pub intercept: MCResult,
    /// `intercept - at_origin` on common draws.
    pub intercept_minus_origin: MCResult,
    pub slope_estimate: f64,
    pub slope_predicted: f64,
    pub stderr: f64,
}

fn check_inputs(beta: f64, z1_norms: &[f64], n_samples: usize) -> Result<()> {
    if !(beta > 0.0) || !beta.is_finite() {
        return Err(Error::InvalidConfig(format!("beta must be positive, got {beta}")));
    }
    if z1_norms.len() < 2 {
        return Err(Error::Precondition("the slope fit needs at least two |z1| values".into()));
    }
    for w in z1_norms.windows(2) {
        if !(w[0] < w[1]) {
            return Err(Error::Precondition("|z1| values must increase strictly".into()));
        }
    }
    if !(z1_norms[0] > 0.0) || z1_norms[z1_norms.len() - 1] > 0.2 {
        return Err(Error::Precondition("|z1| values must lie in (0, 0.2]".into()));
    }
    if n_samples < 2 {
        return Err(Error::InvalidConfig("need at least two samples".into()));
    }
    Ok(())
}

/// Averaged kernel values on `z1_norms` and at the origin, with the
/// per-sample regression slope and intercept.
#[allow(clippy::too_many_arguments)]
pub fn cusp_profile(
    b: Vec3,
    beta: f64,
    z2: Vec3,
    z1_norms: &[f64],
    slot: SourceSlot,
    c12: f64,
    n_samples: usize,
    seed: u64,
) -> Result<CuspCheck> {
    check_inputs(beta, z1_norms, n_samples)?;
    let sampler = CuspSampler::new(b, beta, z2, slot, z1_norms);
    let k = z1_norms.len();
    let mean = z1_norms.iter().sum::<f64>() / k as f64;
    let sxx: f64 = z1_norms.iter().map(|r| (r - mean) * (r - mean)).sum();
    let slope_w: Vec<f64> = z1_norms.iter().map(|r| (r - mean) / sxx).collect();
    let icept_w: Vec<f64> = slope_w.iter().map(|w| 1.0 / k as f64 - mean * w).collect();
    let integrand = |y: &[f64], out: &mut [f64]| {
        let (y1, y2) = match slot {
            SourceSlot::Direct => (&y[..3], &y[3..]),
            SourceSlot::Exchange => (&y[3..], &y[..3]),
        };
        let d2: f64 = (0..3).map(|i| (y1[i] - b.0[i]).powi(2)).sum();
        let p2: f64 = (0..3).map(|i| y2[i] * y2[i]).sum();
        let f = gaussian_bump(d2, beta, 3) * (-p2).exp();
        let (s, q) = s_q(y, z2);
        if f == 0.0 || s == 0.0 {
            return;
        }
        let base = c12 * f * FRAC_1_SQRT_2 / s;
        let mut slope = 0.0;
        let mut icept = 0.0;
        for j in 0..k {
            let v = base * direction_averaged_kernel(s, q, z1_norms[j]);
            out[j] = v;
            slope += slope_w[j] * v;
            icept += icept_w[j] * v;
        }
        let origin = base * direction_averaged_kernel(s, q, 0.0);
        out[k] = origin;
        out[k + 1] = slope;
        out[k + 2] = icept;
        out[k + 3] = icept - origin;
    };
    let res = mc_integrate_many(integrand, k + 4, &sampler, n_samples, seed)?;
    let slope_predicted = cusp_slope_predicted(b, beta, z2, c12);
    Ok(CuspCheck {
        z1_norms: z1_norms.to_vec(),
        values: res[..k].to_vec(),
        at_origin: res[k],
        slope: res[k + 1],
        intercept: res[k + 2],
        intercept_minus_origin: res[k + 3],
        slope_estimate: res[k + 1].value,
        slope_predicted,
        stderr: res[k + 1].stderr,
    })
}

/// Monte Carlo slope of the direction-averaged direct kernel against the
/// predicted cusp coefficient.
///
/// Fails with [`Error::InsufficientSamples`] when the slope's standard
/// error exceeds 30% of the prediction.
pub fn cusp_expansion_check(
    b: Vec3,
    beta: f64,
    z2: Vec3,
    z1_norms: &[f64],
    c12: f64,
    n_samples: usize,
    seed: u64,
) -> Result<CuspCheck> {
    let out = cusp_profile(b, beta, z2, z1_norms, SourceSlot::Direct, c12, n_samples, seed)?;
    let bound = 0.3 * out.slope_predicted.abs();
    if !(out.stderr <= bound) {
        return Err(Error::InsufficientSamples { stderr: out.stderr, bound });
    }
    Ok(out)
}

/// Leading (linear) coefficients of the direct and exchange kernels.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ExchangeCheck {
    pub direct_leading: MCResult,
    pub exchange_leading: MCResult,
}

impl ExchangeCheck {
    /// `|direct - exchange| <= 2 (stderr_d + stderr_x)`.
    pub fn agree(&self) -> bool {
        (self.direct_leading.value - self.exchange_leading.value).abs()
            <= 2.0 * (self.direct_leading.stderr + self.exchange_leading.stderr)
    }
}

/// Estimates the cusp slope with the mollifier on particle 1 and on
/// particle 2, on independent random streams, at `z2 = 0`.
pub fn exchange_leading_equivalence(b: Vec3, beta: f64, c12: f64, n_samples: usize, seed: u64) -> Result<ExchangeCheck> {
    let d = cusp_profile(b, beta, Vec3::ZERO, &DEFAULT_CUSP_RHOS, SourceSlot::Direct, c12, n_samples, seed)?;
    let x = cusp_profile(b, beta, Vec3::ZERO, &DEFAULT_CUSP_RHOS, SourceSlot::Exchange, c12, n_samples, seed ^ 0x9e37_79b9_7f4a_7c15)?;
    let bound = 0.3 * d.slope_predicted.abs();
    for s in [d.stderr, x.stderr] {
        if !(s <= bound) {
            return Err(Error::InsufficientSamples { stderr: s, bound });
        }
    }
    Ok(ExchangeCheck { direct_leading: d.slope, exchange_leading: x.slope })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::contraction::DEFAULT_C12;
    use crate::quadrature::{integrate_2d, mc_integrate, spherical_average, GaussianSampler, Interval, QuadConfig, Rectangle};

    #[test]
    fn direction_average_matches_sampling() {
        let u = Vec3::new(0.3, -0.1, 0.2);
        let q = 0.15;
        let rho = 0.25;
        let f = |d: [f64; 3]| {
            let z1 = rho * Vec3(d);
            1.0 / ((z1 - u).norm2() + q * q).powi(2)
        };
        let mc = spherical_average(f, 400_000, 11).unwrap();
        let exact = direction_averaged_kernel(u.norm(), q, rho);
        assert!((mc.value - exact).abs() < 4.0 * mc.stderr, "{} vs {exact}", mc.value);
        // flipping one component of z1 leaves the average unchanged
        let g = |d: [f64; 3]| f([-d[0], d[1], d[2]]);
        let mc2 = spherical_average(g, 400_000, 12).unwrap();
        assert!((mc.value - mc2.value).abs() < 4.0 * (mc.stderr + mc2.stderr));
    }

    #[test]
    fn sampler_density_consistent() {
        // E_p[g / p] = int g = 1 for the normalized Gaussian component g; a
        // density missing or double-counting a component would bias this
        let s = CuspSampler::new(Vec3::ZERO, 25.0, Vec3::ZERO, SourceSlot::Direct, &DEFAULT_CUSP_RHOS);
        let g = GaussianSampler::new(s.mean.to_vec(), s.sigma.to_vec()).unwrap();
        let r = mc_integrate(|y| g.density(y), &s, 400_000, 5).unwrap();
        assert!((r.value - 1.0).abs() < 4.0 * r.stderr, "{} +- {}", r.value, r.stderr);
    }

    #[test]
    fn without_coulomb_factors_direct_equals_exchange() {
        // both sources integrate to int phi = pi^{3/2}
        let beta = 25.0;
        let g = GaussianSampler::new(vec![0.0; 6], vec![0.6; 6]).unwrap();
        let direct = |y: &[f64]| {
            gaussian_bump(y[..3].iter().map(|v| v * v).sum(), beta, 3) * (-y[3..].iter().map(|v| v * v).sum::<f64>()).exp()
        };
        let exchange = |y: &[f64]| {
            gaussian_bump(y[3..].iter().map(|v| v * v).sum(), beta, 3) * (-y[..3].iter().map(|v| v * v).sum::<f64>()).exp()
        };
        let a = mc_integrate(direct, &g, 200_000, 2).unwrap();
        let b = mc_integrate(exchange, &g, 200_000, 3).unwrap();
        let exact = PI.powf(1.5);
        assert!((a.value - exact).abs() < 5.0 * a.stderr);
        assert!((b.value - exact).abs() < 5.0 * b.stderr);
    }

    // P(rho) = c12 (beta/pi)^{3/2} / sqrt(2) * 16 pi^2
    //        * int int s q^2 exp(-(beta+1)(s^2+q^2)/2) sinhc((beta-1) s q) A(s, q, rho) ds dq
    // for b = 0, z2 = 0 (angular integrals done analytically)
    fn reduced_quadrature(beta: f64, rho: f64) -> f64 {
        let f = |q: f64, s: f64| {
            let x = (beta - 1.0) * s * q;
            let e = -0.5 * (beta + 1.0) * (s * s + q * q);
            let sh = if x < 1e-8 { e.exp() } else { ((e + x).exp() - (e - x).exp()) / (2.0 * x) };
            s * q * q * sh * direction_averaged_kernel(s, q, rho)
        };
        let rect = Rectangle { x: Interval::Finite(0.0, 8.0), y: Interval::Finite(0.0, 8.0) };
        let cfg = QuadConfig { rel_tol: 1e-7, abs_tol: 1e-12, max_evals: 20_000 };
        let v = integrate_2d(f, rect, &cfg).unwrap().value;
        DEFAULT_C12 * (beta / PI).powf(1.5) * FRAC_1_SQRT_2 * 16.0 * PI * PI * v
    }

    #[test]
    fn monte_carlo_matches_reduced_quadrature() {
        let rhos = [0.01, 0.02];
        let res = cusp_profile(Vec3::ZERO, 25.0, Vec3::ZERO, &rhos, SourceSlot::Direct, DEFAULT_C12, 400_000, 9).unwrap();
        let q0 = reduced_quadrature(25.0, 0.0);
        assert!((res.at_origin.value - q0).abs() < 4.0 * res.at_origin.stderr, "{} vs {q0}", res.at_origin.value);
        let q1 = reduced_quadrature(25.0, 0.01);
        assert!((res.values[0].value - q1).abs() < 4.0 * res.values[0].stderr, "{} vs {q1}", res.values[0].value);
    }

    #[test]
    fn deterministic_under_seed() {
        let a = cusp_profile(Vec3::ZERO, 25.0, Vec3::ZERO, &DEFAULT_CUSP_RHOS, SourceSlot::Direct, DEFAULT_C12, 20_000, 4).unwrap();
        let b = cusp_profile(Vec3::ZERO, 25.0, Vec3::ZERO, &DEFAULT_CUSP_RHOS, SourceSlot::Direct, DEFAULT_C12, 20_000, 4).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn input_validation_and_insufficient_samples() {
        let b = Vec3::ZERO;
        assert!(cusp_expansion_check(b, 25.0, b, &[0.01], DEFAULT_C12, 1000, 0).is_err());
        assert!(cusp_expansion_check(b, 25.0, b, &[0.02, 0.01], DEFAULT_C12, 1000, 0).is_err());
        assert!(cusp_expansion_check(b, 25.0, b, &[0.1, 0.3], DEFAULT_C12, 1000, 0).is_err());
        let r = cusp_expansion_check(b, 25.0, b, &[0.001, 0.0011], DEFAULT_C12, 20, 0);
        assert!(matches!(r, Err(Error::InsufficientSamples { .. })));
    }

    #[test]
    fn predicted_slope_units() {
        let p = cusp_slope_predicted(Vec3::ZERO, 25.0, Vec3::ZERO, DEFAULT_C12);
        assert!((p + FRAC_1_SQRT_2 * (25.0 / PI).powf(1.5)).abs() < 1e-12);
    }
}
