//! Adaptive Gauss-Kronrod quadrature and seeded Monte Carlo integration.
//!
//! The 1-d integrator bisects the panel with the largest `|K15 - G7|` until
//! the summed estimate meets `max(abs_tol, rel_tol * |value|)`. Panels are
//! summed in left-to-right order, so results do not depend on the order in
//! which panels were refined.
//!
//! Monte Carlo draws come from independent ChaCha streams, one per chunk of
//! samples. Chunks are evaluated in parallel and merged in chunk order, so a
//! given `(integrand, samples, seed)` reproduces the same bits on any thread
//! count.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use rand::{Rng, RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

const XGK: [f64; 8] = [
    0.991_455_371_120_812_639_206_854_697_526_329,
    0.949_107_912_342_758_524_526_189_684_047_851,
    0.864_864_423_359_769_072_789_712_788_640_926,
    0.741_531_185_599_394_439_863_864_773_280_788,
    0.586_087_235_467_691_130_294_144_845_693_013,
    0.405_845_151_377_397_166_906_606_412_076_961,
    0.207_784_955_007_898_467_600_689_403_773_245,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_224_963_732_008_058_970,
    0.063_092_092_629_978_553_290_700_663_189_204,
    0.104_790_010_322_250_183_839_876_322_541_518,
    0.140_653_259_715_525_918_745_189_590_510_238,
    0.169_004_726_639_267_902_826_583_426_598_550,
    0.190_350_578_064_785_409_913_256_402_421_014,
    0.204_432_940_075_298_892_414_161_999_234_649,
    0.209_482_141_084_727_828_012_999_174_891_714,
];
// Gauss weights at XGK[1], XGK[3], XGK[5], XGK[7]
const WG: [f64; 4] = [
    0.129_484_966_168_869_693_270_611_432_679_082,
    0.279_705_391_489_276_667_901_467_771_423_780,
    0.381_830_050_505_118_944_950_369_775_488_975,
    0.417_959_183_673_469_387_755_102_040_816_327,
];

/// Tolerances and evaluation budget for the adaptive integrators.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QuadConfig {
    pub rel_tol: f64,
    pub abs_tol: f64,
    pub max_evals: usize,
}

impl QuadConfig {
    pub fn new(rel_tol: f64, abs_tol: f64, max_evals: usize) -> Result<Self> {
        let cfg = QuadConfig { rel_tol, abs_tol, max_evals };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.rel_tol > 0.0) || !(self.abs_tol > 0.0) {
            return Err(Error::InvalidConfig("quadrature tolerances must be strictly positive".into()));
        }
        if self.max_evals < 15 {
            return Err(Error::InvalidConfig("max_evals must be at least 15".into()));
        }
        Ok(())
    }

    /// Tolerance used for the inner integral of an iterated 2-d rule.
    pub fn tightened(&self, factor: f64) -> QuadConfig {
        QuadConfig { rel_tol: self.rel_tol / factor, abs_tol: self.abs_tol / factor, max_evals: self.max_evals }
    }

    #[inline]
    pub fn target(&self, value: f64) -> f64 {
        self.abs_tol.max(self.rel_tol * value.abs())
    }
}

impl Default for QuadConfig {
    fn default() -> Self {
        QuadConfig { rel_tol: 1e-10, abs_tol: 1e-300, max_evals: 200_000 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QuadResult {
    pub value: f64,
    pub error_estimate: f64,
    pub evaluations: usize,
    pub converged: bool,
}

impl QuadResult {
    /// Turns an unconverged result into [`Error::NonConvergence`].
    pub fn require_converged(self) -> Result<QuadResult> {
        if self.converged {
            Ok(self)
        } else {
            Err(Error::NonConvergence {
                value: self.value,
                error_estimate: self.error_estimate,
                evaluations: self.evaluations,
            })
        }
    }

    /// Multiplies value and error by a constant.
    pub fn scaled(self, c: f64) -> QuadResult {
        QuadResult { value: self.value * c, error_estimate: self.error_estimate * c.abs(), ..self }
    }
}

/// Integration range in one variable.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Interval {
    Finite(f64, f64),
    /// `[a, inf)`
    SemiInfinite(f64),
    /// `(-inf, inf)`
    Infinite,
}

#[derive(Debug, Clone, Copy)]
struct Panel {
    a: f64,
    b: f64,
    value: f64,
    error: f64,
}

impl PartialEq for Panel {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}
impl Eq for Panel {}
impl PartialOrd for Panel {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Panel {
    fn cmp(&self, other: &Self) -> Ordering {
        self.error.total_cmp(&other.error).then_with(|| other.a.total_cmp(&self.a))
    }
}

/// One G7/K15 panel evaluation. Returns `(kronrod, |kronrod - gauss|)`.
fn gk15<F: FnMut(f64) -> Result<f64>>(f: &mut F, a: f64, b: f64) -> Result<(f64, f64)> {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let fc = f(c)?;
    let mut k = WGK[7] * fc;
    let mut g = WG[3] * fc;
    for j in 0..7 {
        let dx = h * XGK[j];
        let s = f(c - dx)? + f(c + dx)?;
        k += WGK[j] * s;
        if j % 2 == 1 {
            g += WG[j / 2] * s;
        }
    }
    Ok((k * h, ((k - g) * h).abs()))
}

fn checked<F: Fn(f64) -> f64>(f: &F) -> impl FnMut(f64) -> Result<f64> + '_ {
    move |x| {
        let y = f(x);
        if y.is_finite() {
            Ok(y)
        } else {
            Err(Error::NonFiniteIntegrand { at: x })
        }
    }
}

/// Core adaptive loop over an initial partition given by `points` (sorted,
/// at least two entries). `eval` returns `(value, error, evaluations)` for a panel.
fn adapt<E>(points: &[f64], cfg: &QuadConfig, mut eval: E) -> Result<QuadResult>
where
    E: FnMut(f64, f64) -> Result<(f64, f64, usize)>,
{
    cfg.validate()?;
    let mut heap = BinaryHeap::new();
    let mut frozen: Vec<Panel> = Vec::new();
    let mut evals = 0usize;
    for w in points.windows(2) {
        let (v, e, n) = eval(w[0], w[1])?;
        evals += n;
        heap.push(Panel { a: w[0], b: w[1], value: v, error: e });
    }
    let totals = |heap: &BinaryHeap<Panel>, frozen: &[Panel]| {
        let mut v = 0.0;
        let mut e = 0.0;
        for p in heap.iter().chain(frozen.iter()) {
            v += p.value;
            e += p.error;
        }
        (v, e)
    };
    let (mut value, mut error) = totals(&heap, &frozen);
    let mut last_cost = evals / points.len().saturating_sub(1).max(1);
    let mut iterations = 0usize;
    while error > cfg.target(value) {
        if evals + 2 * last_cost > cfg.max_evals {
            break;
        }
        let Some(worst) = heap.pop() else { break };
        let mid = 0.5 * (worst.a + worst.b);
        if !(mid > worst.a && mid < worst.b) || (worst.b - worst.a) <= 4.0 * f64::EPSILON * mid.abs() {
            frozen.push(worst);
            continue;
        }
        let (v1, e1, n1) = eval(worst.a, mid)?;
        let (v2, e2, n2) = eval(mid, worst.b)?;
        evals += n1 + n2;
        last_cost = (n1 + n2) / 2;
        heap.push(Panel { a: worst.a, b: mid, value: v1, error: e1 });
        heap.push(Panel { a: mid, b: worst.b, value: v2, error: e2 });
        iterations += 1;
        // running sums drift; recompute them periodically
        if iterations % 64 == 0 {
            (value, error) = totals(&heap, &frozen);
        } else {
            value += v1 + v2 - worst.value;
            error += e1 + e2 - worst.error;
        }
    }
    let mut panels: Vec<Panel> = heap.into_vec();
    panels.extend(frozen);
    panels.sort_by(|p, q| p.a.total_cmp(&q.a));
    let value: f64 = panels.iter().map(|p| p.value).sum();
    let error: f64 = panels.iter().map(|p| p.error).sum();
    Ok(QuadResult { value, error_estimate: error, evaluations: evals, converged: error <= cfg.target(value) })
}

fn check_breakpoints(points: &[f64]) -> Result<()> {
    if points.len() < 2 {
        return Err(Error::Precondition("integration needs at least two endpoints".into()));
    }
    for w in points.windows(2) {
        if !(w[0] < w[1]) || !w[0].is_finite() || !w[1].is_finite() {
            return Err(Error::Precondition(format!("integration limits must increase strictly, got {} then {}", w[0], w[1])));
        }
    }
    Ok(())
}

/// Adaptive integral of `f` over the finite interval `[a, b]`.
///
/// An unmet tolerance is reported through `converged = false`; a non-finite
/// integrand value is an error.
pub fn integrate_1d<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, cfg: &QuadConfig) -> Result<QuadResult> {
    integrate_1d_points(f, &[a, b], cfg)
}

/// As [`integrate_1d`], starting from the partition `points` (for example
/// known kinks or peaks of the integrand).
pub fn integrate_1d_points<F: Fn(f64) -> f64>(f: F, points: &[f64], cfg: &QuadConfig) -> Result<QuadResult> {
    check_breakpoints(points)?;
    let mut g = checked(&f);
    adapt(points, cfg, |a, b| {
        let (v, e) = gk15(&mut g, a, b)?;
        Ok((v, e, 15))
    })
}

/// `int_a^inf f` through `t = a + s/(1-s)`, `s in [0, 1)`.
pub fn integrate_semi_infinite<F: Fn(f64) -> f64>(f: F, a: f64, cfg: &QuadConfig) -> Result<QuadResult> {
    if !a.is_finite() {
        return Err(Error::Precondition(format!("lower limit must be finite, got {a}")));
    }
    integrate_1d(move |s| semi_infinite_map(&f, a, s), 0.0, 1.0, cfg)
}

/// `int_-inf^inf f` through `t = s/(1-s^2)`, `s in (-1, 1)`.
pub fn integrate_infinite<F: Fn(f64) -> f64>(f: F, cfg: &QuadConfig) -> Result<QuadResult> {
    integrate_1d(move |s| infinite_map(&f, s), -1.0, 1.0, cfg)
}

/// Integral over any [`Interval`].
pub fn integrate<F: Fn(f64) -> f64>(f: F, range: Interval, cfg: &QuadConfig) -> Result<QuadResult> {
    match range {
        Interval::Finite(a, b) => integrate_1d(f, a, b, cfg),
        Interval::SemiInfinite(a) => integrate_semi_infinite(f, a, cfg),
        Interval::Infinite => integrate_infinite(f, cfg),
    }
}

#[inline]
fn semi_infinite_map<F: Fn(f64) -> f64>(f: &F, a: f64, s: f64) -> f64 {
    let om = 1.0 - s;
    let t = a + s / om;
    let y = f(t);
    if y == 0.0 {
        0.0
    } else {
        y / (om * om)
    }
}

#[inline]
fn infinite_map<F: Fn(f64) -> f64>(f: &F, s: f64) -> f64 {
    let q = 1.0 - s * s;
    let t = s / q;
    let y = f(t);
    if y == 0.0 {
        0.0
    } else {
        y * (1.0 + s * s) / (q * q)
    }
}

/// Rectangle for [`integrate_2d`]: `x` is the outer variable, `y` the inner.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Rectangle {
    pub x: Interval,
    pub y: Interval,
}

/// Iterated adaptive integral of `f(x, y)` over a rectangle.
///
/// The inner integral uses tolerances 10x tighter than `cfg`. Inner
/// integrals at the 15 nodes of an outer panel run in parallel and are
/// combined in node order. Inner error estimates are folded into the outer
/// panel error; an unconverged inner integral marks the whole result
/// unconverged. `cfg.max_evals` bounds outer nodes only.
pub fn integrate_2d<F>(f: F, rect: Rectangle, cfg: &QuadConfig) -> Result<QuadResult>
where
    F: Fn(f64, f64) -> f64 + Sync,
{
    match rect.x {
        Interval::Finite(a, b) => integrate_2d_points(f, &[a, b], rect.y, cfg),
        Interval::SemiInfinite(a) => {
            let g = move |s: f64, y: f64| {
                let om = 1.0 - s;
                let x = a + s / om;
                let v = f(x, y);
                if v == 0.0 {
                    0.0
                } else {
                    v / (om * om)
                }
            };
            integrate_2d_points(g, &[0.0, 1.0], rect.y, cfg)
        }
        Interval::Infinite => {
            let g = move |s: f64, y: f64| {
                let q = 1.0 - s * s;
                let v = f(s / q, y);
                if v == 0.0 {
                    0.0
                } else {
                    v * (1.0 + s * s) / (q * q)
                }
            };
            integrate_2d_points(g, &[-1.0, 1.0], rect.y, cfg)
        }
    }
}

/// As [`integrate_2d`] with a finite outer range split at `x_points`.
pub fn integrate_2d_points<F>(f: F, x_points: &[f64], y: Interval, cfg: &QuadConfig) -> Result<QuadResult>
where
    F: Fn(f64, f64) -> f64 + Sync,
{
    cfg.validate()?;
    let inner_cfg = cfg.tightened(10.0);
    let inner = |x: f64| -> Result<QuadResult> { integrate(|v| f(x, v), y, &inner_cfg) };
    let outer_points = x_points;
    check_breakpoints(outer_points)?;
    let all_inner_converged = std::sync::atomic::AtomicBool::new(true);
    // max_evals bounds outer nodes; inner evaluations are only reported
    let mut total_evals = 0usize;
    let res = adapt(outer_points, cfg, |a, b| {
        let c = 0.5 * (a + b);
        let h = 0.5 * (b - a);
        let mut nodes = [0.0; 15];
        nodes[0] = c;
        for j in 0..7 {
            nodes[1 + 2 * j] = c - h * XGK[j];
            nodes[2 + 2 * j] = c + h * XGK[j];
        }
        let vals: Vec<Result<(f64, f64, usize)>> = nodes
            .par_iter()
            .map(|&x| {
                let r = inner(x)?;
                if !r.converged {
                    all_inner_converged.store(false, std::sync::atomic::Ordering::Relaxed);
                }
                Ok((r.value, r.error_estimate, r.evaluations))
            })
            .collect();
        let mut fv = [0.0; 15];
        let mut fe = [0.0; 15];
        let mut n = 0;
        for (i, v) in vals.into_iter().enumerate() {
            let (v, e, k) = v?;
            if !v.is_finite() {
                return Err(Error::NonFiniteIntegrand { at: nodes[i] });
            }
            fv[i] = v;
            fe[i] = e;
            n += k;
        }
        let mut k = WGK[7] * fv[0];
        let mut g = WG[3] * fv[0];
        let mut inner_err = WGK[7] * fe[0];
        for j in 0..7 {
            let s = fv[1 + 2 * j] + fv[2 + 2 * j];
            k += WGK[j] * s;
            inner_err += WGK[j] * (fe[1 + 2 * j] + fe[2 + 2 * j]);
            if j % 2 == 1 {
                g += WG[j / 2] * s;
            }
        }
        total_evals += n;
        Ok((k * h, ((k - g) * h).abs() + inner_err * h, 15))
    })?;
    let converged = res.converged && all_inner_converged.load(std::sync::atomic::Ordering::Relaxed);
    Ok(QuadResult { converged, evaluations: total_evals, ..res })
}

// ---------------------------------------------------------------------------
// Monte Carlo

/// Monte Carlo estimate with its standard error.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MCResult {
    pub value: f64,
    pub stderr: f64,
    pub samples: usize,
    pub seed: u64,
}

/// Proposal distribution for importance sampling.
///
/// `draw` fills `out` with a point; `density` must return the proposal
/// density of any point `draw` can produce.
pub trait Sampler {
    fn dim(&self) -> usize;
    fn draw(&self, rng: &mut dyn RngCore, out: &mut [f64]);
    fn density(&self, x: &[f64]) -> f64;
}

/// Independent Gaussians with the given means and standard deviations.
#[derive(Debug, Clone, PartialEq)]
pub struct GaussianSampler {
    pub mean: Vec<f64>,
    pub sigma: Vec<f64>,
}

impl GaussianSampler {
    pub fn new(mean: Vec<f64>, sigma: Vec<f64>) -> Result<Self> {
        if mean.len() != sigma.len() || mean.is_empty() {
            return Err(Error::InvalidConfig("mean and sigma must have the same nonzero length".into()));
        }
        if sigma.iter().any(|s| !(*s > 0.0)) {
            return Err(Error::InvalidConfig("sigma must be positive".into()));
        }
        Ok(GaussianSampler { mean, sigma })
    }
}

impl Sampler for GaussianSampler {
    fn dim(&self) -> usize {
        self.mean.len()
    }
    fn draw(&self, rng: &mut dyn RngCore, out: &mut [f64]) {
        for (i, o) in out.iter_mut().enumerate() {
            let z: f64 = rng.sample(StandardNormal);
            *o = self.mean[i] + self.sigma[i] * z;
        }
    }
    fn density(&self, x: &[f64]) -> f64 {
        let mut e = 0.0;
        let mut norm = 1.0;
        for i in 0..self.mean.len() {
            let z = (x[i] - self.mean[i]) / self.sigma[i];
            e += 0.5 * z * z;
            norm *= self.sigma[i] * (2.0 * std::f64::consts::PI).sqrt();
        }
        (-e).exp() / norm
    }
}

/// Uniform distribution on an axis-aligned box.
#[derive(Debug, Clone, PartialEq)]
pub struct UniformBox {
    pub lower: Vec<f64>,
    pub upper: Vec<f64>,
}

impl Sampler for UniformBox {
    fn dim(&self) -> usize {
        self.lower.len()
    }
    fn draw(&self, rng: &mut dyn RngCore, out: &mut [f64]) {
        for (i, o) in out.iter_mut().enumerate() {
            *o = self.lower[i] + (self.upper[i] - self.lower[i]) * rng.random::<f64>();
        }
    }
    fn density(&self, x: &[f64]) -> f64 {
        let mut vol = 1.0;
        for i in 0..self.lower.len() {
            if x[i] < self.lower[i] || x[i] > self.upper[i] {
                return 0.0;
            }
            vol *= self.upper[i] - self.lower[i];
        }
        1.0 / vol
    }
}

/// 3-d proposal with radial density proportional to `r` inside a ball of
/// radius `radius` around `center`, i.e. `p(x) = 1 / (2 pi R^2 |x - c|)`.
/// Cancels a Coulomb singularity at the center.
#[derive(Debug, Clone, PartialEq)]
pub struct CoulombBall {
    pub center: [f64; 3],
    pub radius: f64,
}

impl Sampler for CoulombBall {
    fn dim(&self) -> usize {
        3
    }
    fn draw(&self, rng: &mut dyn RngCore, out: &mut [f64]) {
        let r = self.radius * rng.random::<f64>().sqrt();
        let d = unit_vector(rng);
        for i in 0..3 {
            out[i] = self.center[i] + r * d[i];
        }
    }
    fn density(&self, x: &[f64]) -> f64 {
        let r = ((x[0] - self.center[0]).powi(2) + (x[1] - self.center[1]).powi(2) + (x[2] - self.center[2]).powi(2)).sqrt();
        if r > self.radius {
            0.0
        } else {
            1.0 / (2.0 * std::f64::consts::PI * self.radius * self.radius * r)
        }
    }
}

/// Weighted mixture of samplers of equal dimension.
pub struct Mixture {
    components: Vec<(f64, Box<dyn Sampler + Send + Sync>)>,
}

impl Mixture {
    pub fn new(components: Vec<(f64, Box<dyn Sampler + Send + Sync>)>) -> Result<Self> {
        if components.is_empty() {
            return Err(Error::InvalidConfig("mixture needs at least one component".into()));
        }
        let dim = components[0].1.dim();
        if components.iter().any(|(w, s)| !(*w > 0.0) || s.dim() != dim) {
            return Err(Error::InvalidConfig("mixture weights must be positive and dimensions equal".into()));
        }
        let total: f64 = components.iter().map(|c| c.0).sum();
        let components = components.into_iter().map(|(w, s)| (w / total, s)).collect();
        Ok(Mixture { components })
    }
}

impl Sampler for Mixture {
    fn dim(&self) -> usize {
        self.components[0].1.dim()
    }
    fn draw(&self, rng: &mut dyn RngCore, out: &mut [f64]) {
        let u: f64 = rng.random();
        let mut acc = 0.0;
        for (w, s) in &self.components {
            acc += w;
            if u < acc {
                s.draw(rng, out);
                return;
            }
        }
        self.components.last().unwrap().1.draw(rng, out);
    }
    fn density(&self, x: &[f64]) -> f64 {
        self.components.iter().map(|(w, s)| w * s.density(x)).sum()
    }
}

/// Uniformly distributed unit vector in 3-space.
pub fn unit_vector(rng: &mut dyn RngCore) -> [f64; 3] {
    let z = 2.0 * rng.random::<f64>() - 1.0;
    let phi = 2.0 * std::f64::consts::PI * rng.random::<f64>();
    let s = (1.0 - z * z).max(0.0).sqrt();
    [s * phi.cos(), s * phi.sin(), z]
}

const CHUNK: usize = 4096;

/// Running mean and second central moment (Welford), mergeable (Chan et al.).
#[derive(Debug, Clone, Copy, Default)]
struct Moments {
    n: f64,
    mean: f64,
    m2: f64,
}

impl Moments {
    #[inline]
    fn push(&mut self, x: f64) {
        self.n += 1.0;
        let d = x - self.mean;
        self.mean += d / self.n;
        self.m2 += d * (x - self.mean);
    }
    fn merge(&mut self, o: &Moments) {
        if o.n == 0.0 {
            return;
        }
        let n = self.n + o.n;
        let d = o.mean - self.mean;
        self.mean += d * o.n / n;
        self.m2 += o.m2 + d * d * self.n * o.n / n;
        self.n = n;
    }
    fn stderr(&self) -> f64 {
        if self.n < 2.0 {
            return f64::INFINITY;
        }
        (self.m2 / (self.n - 1.0) / self.n).sqrt()
    }
}

/// Random stream for chunk `chunk` under `seed`.
pub fn chunk_rng(seed: u64, chunk: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(chunk);
    rng
}

/// Importance-sampled estimate of `int f` using `n` draws from `sampler`.
pub fn mc_integrate<F, S>(f: F, sampler: &S, n: usize, seed: u64) -> Result<MCResult>
where
    F: Fn(&[f64]) -> f64 + Sync,
    S: Sampler + Sync + ?Sized,
{
    let r = mc_integrate_many(|x, out| out[0] = f(x), 1, sampler, n, seed)?;
    Ok(r[0])
}

/// Vector-valued variant: `f` writes `n_out` values per point; every output
/// shares the same draws (common random numbers).
pub fn mc_integrate_many<F, S>(f: F, n_out: usize, sampler: &S, n: usize, seed: u64) -> Result<Vec<MCResult>>
where
    F: Fn(&[f64], &mut [f64]) + Sync,
    S: Sampler + Sync + ?Sized,
{
    if n < 2 {
        return Err(Error::InvalidConfig("Monte Carlo needs at least two samples".into()));
    }
    if n_out == 0 {
        return Err(Error::InvalidConfig("Monte Carlo needs at least one output".into()));
    }
    let dim = sampler.dim();
    let n_chunks = n.div_ceil(CHUNK);
    let partial: Vec<Result<Vec<Moments>>> = (0..n_chunks)
        .into_par_iter()
        .map(|c| {
            let mut rng = chunk_rng(seed, c as u64);
            let count = CHUNK.min(n - c * CHUNK);
            let mut x = vec![0.0; dim];
            let mut out = vec![0.0; n_out];
            let mut m = vec![Moments::default(); n_out];
            for _ in 0..count {
                sampler.draw(&mut rng, &mut x);
                let p = sampler.density(&x);
                if !(p > f64::MIN_POSITIVE) || !p.is_finite() {
                    return Err(Error::DegenerateSampler { density: p });
                }
                out.iter_mut().for_each(|o| *o = 0.0);
                f(&x, &mut out);
                for k in 0..n_out {
                    let w = out[k] / p;
                    if !w.is_finite() {
                        return Err(Error::NonFiniteIntegrand { at: x[0] });
                    }
                    m[k].push(w);
                }
            }
            Ok(m)
        })
        .collect();
    let mut total = vec![Moments::default(); n_out];
    for chunk in partial {
        let chunk = chunk?;
        for k in 0..n_out {
            total[k].merge(&chunk[k]);
        }
    }
    Ok(total.iter().map(|m| MCResult { value: m.mean, stderr: m.stderr(), samples: n, seed }).collect())
}

/// Mean of `f` over `n_dirs` uniformly random unit vectors in 3-space.
pub fn spherical_average<F>(f: F, n_dirs: usize, seed: u64) -> Result<MCResult>
where
    F: Fn([f64; 3]) -> f64 + Sync,
{
    if n_dirs < 6 {
        return Err(Error::Precondition(format!("spherical_average needs at least 6 directions, got {n_dirs}")));
    }
    struct Sphere;
    impl Sampler for Sphere {
        fn dim(&self) -> usize {
            3
        }
        fn draw(&self, rng: &mut dyn RngCore, out: &mut [f64]) {
            out.copy_from_slice(&unit_vector(rng));
        }
        fn density(&self, _x: &[f64]) -> f64 {
            1.0
        }
    }
    mc_integrate(|x| f([x[0], x[1], x[2]]), &Sphere, n_dirs, seed)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn cfg() -> QuadConfig {
        QuadConfig { rel_tol: 1e-12, abs_tol: 1e-300, max_evals: 100_000 }
    }

    #[test]
    fn cos_squared() {
        let r = integrate_1d(|x| x.cos().powi(2), 0.0, PI / 2.0, &cfg()).unwrap();
        assert!(r.converged);
        assert!((r.value - PI / 4.0).abs() < 1e-14);
    }

    #[test]
    fn gaussian_on_the_line() {
        let r = integrate_infinite(|t| (-t * t).exp(), &cfg()).unwrap();
        assert!((r.value - PI.sqrt()).abs() < 1e-12);
        let r = integrate_semi_infinite(|t| (-t).exp(), 2.0, &cfg()).unwrap();
        assert!((r.value - (-2.0f64).exp()).abs() < 1e-13);
    }

    #[test]
    fn endpoint_singularity() {
        let r = integrate_1d(|x| x.ln(), 0.0, 1.0, &cfg()).unwrap();
        assert!((r.value + 1.0).abs() < 1e-11);
    }

    #[test]
    fn nan_is_an_error() {
        let r = integrate_1d(|x| if x > 0.5 { f64::NAN } else { x }, 0.0, 1.0, &cfg());
        assert!(matches!(r, Err(Error::NonFiniteIntegrand { .. })));
    }

    #[test]
    fn budget_exhaustion_is_flagged() {
        let c = QuadConfig { rel_tol: 1e-15, abs_tol: 1e-300, max_evals: 45 };
        let r = integrate_1d(|x| (1.0 / x).sin(), 1e-3, 1.0, &c).unwrap();
        assert!(!r.converged);
        assert!(r.evaluations <= 45);
        assert!(r.require_converged().is_err());
    }

    #[test]
    fn config_validation() {
        assert!(QuadConfig::new(0.0, 1e-10, 100).is_err());
        assert!(QuadConfig::new(1e-10, 1e-10, 14).is_err());
        assert!(integrate_1d(|x| x, 1.0, 0.0, &cfg()).is_err());
    }

    #[test]
    fn iterated_2d() {
        let rect = Rectangle { x: Interval::Finite(0.0, 1.0), y: Interval::SemiInfinite(0.0) };
        let r = integrate_2d(|x, y| x * (-y * x.max(0.1)).exp(), rect, &QuadConfig { rel_tol: 1e-10, ..cfg() }).unwrap();
        // int_0^1 x / max(x, 0.1) dx
        let exact = 0.05 + 0.9;
        assert!((r.value - exact).abs() < 1e-8, "{}", r.value);
    }

    #[test]
    fn mc_is_deterministic_and_scales() {
        let s = UniformBox { lower: vec![0.0, 0.0], upper: vec![1.0, 1.0] };
        let f = |x: &[f64]| x[0] * x[1] + x[0];
        let a = mc_integrate(f, &s, 20_000, 7).unwrap();
        let b = mc_integrate(f, &s, 20_000, 7).unwrap();
        assert_eq!(a.value.to_bits(), b.value.to_bits());
        assert!((a.value - 0.75).abs() < 5.0 * a.stderr);
        let c = mc_integrate(f, &s, 40_000, 7).unwrap();
        let ratio = c.stderr / a.stderr;
        assert!((ratio * 2f64.sqrt() - 1.0).abs() < 0.2, "ratio {ratio}");
    }

    #[test]
    fn coulomb_ball_cancels_singularity() {
        let s = CoulombBall { center: [0.0; 3], radius: 1.0 };
        // int_{|x|<1} 1/|x| = 2 pi
        let f = |x: &[f64]| 1.0 / (x[0] * x[0] + x[1] * x[1] + x[2] * x[2]).sqrt();
        let r = mc_integrate(f, &s, 10_000, 1).unwrap();
        assert!((r.value - 2.0 * PI).abs() < 1e-9);
    }

    #[test]
    fn degenerate_sampler_detected() {
        let s = GaussianSampler::new(vec![0.0], vec![1e-3]).unwrap();
        struct Bad(GaussianSampler);
        impl Sampler for Bad {
            fn dim(&self) -> usize {
                1
            }
            fn draw(&self, rng: &mut dyn RngCore, out: &mut [f64]) {
                self.0.draw(rng, out);
                out[0] += 10.0;
            }
            fn density(&self, x: &[f64]) -> f64 {
                self.0.density(x)
            }
        }
        let r = mc_integrate(|_| 1.0, &Bad(s), 100, 0);
        assert!(matches!(r, Err(Error::DegenerateSampler { .. })));
    }

    #[test]
    fn spherical_average_of_z_squared() {
        let r = spherical_average(|d| d[2] * d[2], 100_000, 3).unwrap();
        assert!((r.value - 1.0 / 3.0).abs() < 4.0 * r.stderr);
        assert!(spherical_average(|_| 1.0, 5, 0).is_err());
    }
}
