//! Model kernels, Gaussian mollifiers and the coordinate maps used by the
//! contracted-kernel integrands.

use std::f64::consts::{FRAC_1_SQRT_2, PI};
use std::ops::{Add, Mul, Neg, Sub};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Cartesian 3-vector. Serializes as `[x, y, z]`.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Vec3(pub [f64; 3]);

impl Vec3 {
    pub const ZERO: Vec3 = Vec3([0.0; 3]);

    pub const fn new(x: f64, y: f64, z: f64) -> Self {
        Vec3([x, y, z])
    }

    pub fn dot(self, o: Vec3) -> f64 {
        self.0[0] * o.0[0] + self.0[1] * o.0[1] + self.0[2] * o.0[2]
    }

    pub fn norm2(self) -> f64 {
        self.dot(self)
    }

    pub fn norm(self) -> f64 {
        self.norm2().sqrt()
    }

    pub fn is_finite(self) -> bool {
        self.0.iter().all(|c| c.is_finite())
    }
}

impl Add for Vec3 {
    type Output = Vec3;
    fn add(self, o: Vec3) -> Vec3 {
        Vec3([self.0[0] + o.0[0], self.0[1] + o.0[1], self.0[2] + o.0[2]])
    }
}

impl Sub for Vec3 {
    type Output = Vec3;
    fn sub(self, o: Vec3) -> Vec3 {
        Vec3([self.0[0] - o.0[0], self.0[1] - o.0[1], self.0[2] - o.0[2]])
    }
}

impl Mul<Vec3> for f64 {
    type Output = Vec3;
    fn mul(self, v: Vec3) -> Vec3 {
        Vec3([self * v.0[0], self * v.0[1], self * v.0[2]])
    }
}

impl Neg for Vec3 {
    type Output = Vec3;
    fn neg(self) -> Vec3 {
        Vec3([-self.0[0], -self.0[1], -self.0[2]])
    }
}

/// Model kernel description; JSON form `{"variant": "...", ...parameters}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "variant")]
pub enum KernelSpec {
    /// `1 / |x - y|`
    Coulomb,
    /// `exp(-alpha |x - y|) / |x - y|`
    Yukawa { alpha: f64 },
    /// `c12 / (|x1 - y1|^2 + |x2 - y2|^2)^2`, the leading six-dimensional resolvent kernel.
    K12Leading { c12: f64 },
    /// `(beta/pi)^(dim/2) exp(-beta |x - center|^2)`
    GaussianBump { center: Vec<f64>, beta: f64, dim: usize },
    /// `exp(-|x|^2)` in any dimension.
    TestGaussian,
}

/// Argument of [`eval_kernel`]; its shape must match the kernel variant.
#[derive(Debug, Clone, PartialEq)]
pub enum KernelPoint {
    /// Two points in 3-space, for Coulomb and Yukawa.
    Pair(Vec3, Vec3),
    /// `(x1, x2)` and `(y1, y2)` in 3-space each, for `K12Leading`.
    TwoParticle { x1: Vec3, x2: Vec3, y1: Vec3, y2: Vec3 },
    /// A single point, for `GaussianBump` (length `dim`) and `TestGaussian`.
    Point(Vec<f64>),
}

impl KernelSpec {
    pub fn validate(&self) -> Result<()> {
        match self {
            KernelSpec::Yukawa { alpha } if !(*alpha > 0.0) => {
                Err(Error::InvalidConfig(format!("Yukawa alpha must be positive, got {alpha}")))
            }
            KernelSpec::K12Leading { c12 } if !c12.is_finite() => Err(Error::InvalidConfig("c12 must be finite".into())),
            KernelSpec::GaussianBump { center, beta, dim } => {
                if !(*beta > 0.0) {
                    return Err(Error::InvalidConfig(format!("bump beta must be positive, got {beta}")));
                }
                if !(1..=3).contains(dim) {
                    return Err(Error::InvalidConfig(format!("bump dim must be 1, 2 or 3, got {dim}")));
                }
                if center.len() != *dim {
                    return Err(Error::InvalidConfig(format!("bump center has {} components, dim is {dim}", center.len())));
                }
                Ok(())
            }
            _ => Ok(()),
        }
    }
}

/// Normalized Gaussian `(beta/pi)^(dim/2) exp(-beta r2)` given the squared distance.
#[inline]
pub fn gaussian_bump(r2: f64, beta: f64, dim: usize) -> f64 {
    (beta / PI).powf(0.5 * dim as f64) * (-beta * r2).exp()
}

/// Evaluates `spec` at `p`.
///
/// Coulomb, Yukawa and `K12Leading` at exactly coincident points return
/// [`Error::Singular`].
pub fn eval_kernel(spec: &KernelSpec, p: &KernelPoint) -> Result<f64> {
    spec.validate()?;
    match (spec, p) {
        (KernelSpec::Coulomb, KernelPoint::Pair(x, y)) => {
            let r = (*x - *y).norm();
            if r == 0.0 {
                return Err(Error::Singular);
            }
            Ok(1.0 / r)
        }
        (KernelSpec::Yukawa { alpha }, KernelPoint::Pair(x, y)) => {
            let r = (*x - *y).norm();
            if r == 0.0 {
                return Err(Error::Singular);
            }
            Ok((-alpha * r).exp() / r)
        }
        (KernelSpec::K12Leading { c12 }, KernelPoint::TwoParticle { x1, x2, y1, y2 }) => {
            let rho2 = (*x1 - *y1).norm2() + (*x2 - *y2).norm2();
            if rho2 == 0.0 {
                return Err(Error::Singular);
            }
            Ok(c12 / (rho2 * rho2))
        }
        (KernelSpec::GaussianBump { center, beta, dim }, KernelPoint::Point(x)) => {
            if x.len() != *dim {
                return Err(Error::Arity("GaussianBump"));
            }
            let r2: f64 = x.iter().zip(center).map(|(a, c)| (a - c) * (a - c)).sum();
            Ok(gaussian_bump(r2, *beta, *dim))
        }
        (KernelSpec::TestGaussian, KernelPoint::Point(x)) => Ok((-x.iter().map(|a| a * a).sum::<f64>()).exp()),
        (KernelSpec::Coulomb, _) => Err(Error::Arity("Coulomb")),
        (KernelSpec::Yukawa { .. }, _) => Err(Error::Arity("Yukawa")),
        (KernelSpec::K12Leading { .. }, _) => Err(Error::Arity("K12Leading")),
        (KernelSpec::GaussianBump { .. }, _) => Err(Error::Arity("GaussianBump")),
        (KernelSpec::TestGaussian, _) => Err(Error::Arity("TestGaussian")),
    }
}

/// `exp(-alpha |x-a|^2) exp(-beta |x-b|^2) = coefficient * exp(-exponent |x-center|^2)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GaussianProduct {
    pub coefficient: f64,
    pub exponent: f64,
    pub center: Vec3,
}

pub fn gaussian_product(alpha: f64, a: Vec3, beta: f64, b: Vec3) -> Result<GaussianProduct> {
    if !(alpha > 0.0) || !(beta > 0.0) {
        return Err(Error::InvalidConfig(format!("Gaussian exponents must be positive, got {alpha} and {beta}")));
    }
    let s = alpha + beta;
    Ok(GaussianProduct {
        coefficient: (-(alpha * beta / s) * (a - b).norm2()).exp(),
        exponent: s,
        center: (1.0 / s) * (alpha * a + beta * b),
    })
}

/// Two-particle hyperspherical coordinates:
/// `x1 = t sin(r) (sin th1 cos ph1, sin th1 sin ph1, cos th1)`,
/// `x2 = t cos(r) (sin th2 cos ph2, sin th2 sin ph2, cos th2)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HypersphericalPoint {
    pub t: f64,
    pub r: f64,
    /// `(theta1, phi1, theta2, phi2)`
    pub angles: [f64; 4],
}

fn spherical_angles(v: Vec3) -> (f64, f64) {
    let n = v.norm();
    if n == 0.0 {
        return (0.0, 0.0);
    }
    let theta = (v.0[2] / n).clamp(-1.0, 1.0).acos();
    let mut phi = v.0[1].atan2(v.0[0]);
    if phi < 0.0 {
        phi += 2.0 * PI;
    }
    if phi >= 2.0 * PI {
        phi = 0.0;
    }
    (theta, phi)
}

fn direction(theta: f64, phi: f64) -> Vec3 {
    let s = theta.sin();
    Vec3([s * phi.cos(), s * phi.sin(), theta.cos()])
}

/// `r` is taken as 0 when both points are at the origin.
pub fn to_hyperspherical(x1: Vec3, x2: Vec3) -> HypersphericalPoint {
    let n1 = x1.norm();
    let n2 = x2.norm();
    let t = n1.hypot(n2);
    let r = if t == 0.0 { 0.0 } else { n1.atan2(n2) };
    let (th1, ph1) = spherical_angles(x1);
    let (th2, ph2) = spherical_angles(x2);
    HypersphericalPoint { t, r, angles: [th1, ph1, th2, ph2] }
}

pub fn from_hyperspherical(p: &HypersphericalPoint) -> (Vec3, Vec3) {
    let [th1, ph1, th2, ph2] = p.angles;
    ((p.t * p.r.sin()) * direction(th1, ph1), (p.t * p.r.cos()) * direction(th2, ph2))
}

/// `t^5 sin^2(r) cos^2(r) sin(theta1) sin(theta2)`.
pub fn volume_element(p: &HypersphericalPoint) -> f64 {
    let (s, c) = p.r.sin_cos();
    p.t.powi(5) * s * s * c * c * p.angles[0].sin() * p.angles[2].sin()
}

/// `z1 = (x1 - x2)/sqrt(2)`, `z2 = (x1 + x2)/sqrt(2)`.
pub fn center_of_mass(x1: Vec3, x2: Vec3) -> (Vec3, Vec3) {
    (FRAC_1_SQRT_2 * (x1 - x2), FRAC_1_SQRT_2 * (x1 + x2))
}

/// Inverse of [`center_of_mass`]: `x1 = (z2 + z1)/sqrt(2)`, `x2 = (z2 - z1)/sqrt(2)`.
pub fn from_center_of_mass(z1: Vec3, z2: Vec3) -> (Vec3, Vec3) {
    (FRAC_1_SQRT_2 * (z2 + z1), FRAC_1_SQRT_2 * (z2 - z1))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quadrature::{integrate_1d, integrate_semi_infinite, QuadConfig};

    #[test]
    fn coulomb_and_k12() {
        let p = KernelPoint::Pair(Vec3::new(0.0, 0.0, 0.0), Vec3::new(0.0, 2.0, 0.0));
        assert_eq!(eval_kernel(&KernelSpec::Coulomb, &p).unwrap(), 0.5);
        let q = KernelPoint::TwoParticle {
            x1: Vec3::new(2.0, 0.0, 0.0),
            x2: Vec3::ZERO,
            y1: Vec3::ZERO,
            y2: Vec3::ZERO,
        };
        assert_eq!(eval_kernel(&KernelSpec::K12Leading { c12: 1.0 }, &q).unwrap(), 1.0 / 16.0);
        let same = KernelPoint::Pair(Vec3::new(1.0, 1.0, 1.0), Vec3::new(1.0, 1.0, 1.0));
        assert_eq!(eval_kernel(&KernelSpec::Coulomb, &same), Err(Error::Singular));
        assert_eq!(eval_kernel(&KernelSpec::Yukawa { alpha: 1.0 }, &same), Err(Error::Singular));
        assert_eq!(eval_kernel(&KernelSpec::Coulomb, &KernelPoint::Point(vec![1.0])), Err(Error::Arity("Coulomb")));
    }

    #[test]
    fn bump_normalization_radial() {
        let cfg = QuadConfig::default();
        for &beta in &[0.5, 10.0, 1e4] {
            let spec = KernelSpec::GaussianBump { center: vec![1.0, -2.0, 0.5], beta, dim: 3 };
            let f = |r: f64| {
                let x = vec![1.0 + r, -2.0, 0.5];
                4.0 * PI * r * r * eval_kernel(&spec, &KernelPoint::Point(x)).unwrap()
            };
            let v = integrate_semi_infinite(f, 0.0, &cfg).unwrap().value;
            assert!((v - 1.0).abs() < 1e-9, "beta = {beta}: {v}");
        }
    }

    #[test]
    fn bump_validation() {
        let bad = KernelSpec::GaussianBump { center: vec![0.0, 0.0], beta: 1.0, dim: 3 };
        assert!(eval_kernel(&bad, &KernelPoint::Point(vec![0.0; 3])).is_err());
        let bad = KernelSpec::Yukawa { alpha: 0.0 };
        assert!(bad.validate().is_err());
    }

    #[test]
    fn json_round_trip() {
        let spec = KernelSpec::GaussianBump { center: vec![0.0, 1.0], beta: 2.5, dim: 2 };
        let s = serde_json::to_string(&spec).unwrap();
        assert!(s.contains("\"variant\":\"GaussianBump\""));
        let back: KernelSpec = serde_json::from_str(&s).unwrap();
        assert_eq!(back, spec);
        let y: KernelSpec = serde_json::from_str(r#"{"variant":"Yukawa","alpha":0.3}"#).unwrap();
        assert_eq!(y, KernelSpec::Yukawa { alpha: 0.3 });
    }

    #[test]
    fn product_formula() {
        let a = Vec3::new(0.0, 0.0, 0.0);
        let b = Vec3::new(2.0, 0.0, 0.0);
        let g = gaussian_product(1.0, a, 1.0, b).unwrap();
        assert!((g.coefficient - (-2.0f64).exp()).abs() < 1e-15);
        assert_eq!(g.center, Vec3::new(1.0, 0.0, 0.0));
        let g = gaussian_product(3.0, b, 0.5, b).unwrap();
        assert_eq!(g.coefficient, 1.0);
        assert_eq!(g.center, b);
    }

    #[test]
    fn hyperspherical_edge_cases() {
        let p = to_hyperspherical(Vec3::new(1.0, 2.0, 3.0), Vec3::ZERO);
        assert!((p.r - PI / 2.0).abs() < 1e-15);
        let p = to_hyperspherical(Vec3::ZERO, Vec3::ZERO);
        assert_eq!(p.r, 0.0);
        assert_eq!(p.t, 0.0);
    }

    #[test]
    fn six_ball_volume() {
        // angular integrals of sin(theta) phi-independent: (4 pi)^2; t^5 -> 1/6
        let cfg = QuadConfig::default();
        let r = integrate_1d(|r| (r.sin() * r.cos()).powi(2), 0.0, PI / 2.0, &cfg).unwrap().value;
        let vol = (4.0 * PI).powi(2) * r / 6.0;
        assert!((vol - PI.powi(3) / 6.0).abs() < 1e-12);
        let p = HypersphericalPoint { t: 1.0, r: PI / 4.0, angles: [PI / 2.0, 0.0, PI / 2.0, 1.0] };
        assert!((volume_element(&p) - 0.25).abs() < 1e-15);
    }

    #[test]
    fn center_of_mass_diagonal() {
        let x = Vec3::new(0.3, -1.0, 2.0);
        let (z1, z2) = center_of_mass(x, x);
        assert_eq!(z1, Vec3::ZERO);
        assert!((z2.norm2() - 2.0 * x.norm2()).abs() < 1e-14);
    }
}
