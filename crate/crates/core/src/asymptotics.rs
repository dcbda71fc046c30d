//! Least-squares fits of singular radial expansions `sum c_j r^e_j (ln r)^k_j`,
//! detection of a logarithmic term, and classification of asymptotic
//! smoothness order.
//!
//! Order convention: a kernel of order `p` behaves like `r^(-3-p)` at the
//! diagonal, so `ln r` has order -3 and `1/r` has order -2.

use std::fmt;

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Sampled radial profile, strictly increasing in `r`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RadialSamples {
    pub points: Vec<(f64, f64)>,
    pub window: (f64, f64),
}

impl RadialSamples {
    /// Window taken from the first and last radius.
    pub fn new(points: Vec<(f64, f64)>) -> Result<Self> {
        let window = match (points.first(), points.last()) {
            (Some(a), Some(b)) => (a.0, b.0),
            _ => return Err(Error::InvalidSamples("no samples".into())),
        };
        Self::with_window(points, window)
    }

    pub fn with_window(points: Vec<(f64, f64)>, window: (f64, f64)) -> Result<Self> {
        let s = RadialSamples { points, window };
        s.validate()?;
        Ok(s)
    }

    /// Samples `f` at `n` log-spaced radii on `[r_min, r_max]`.
    pub fn from_fn<F: Fn(f64) -> f64>(f: F, r_min: f64, r_max: f64, n: usize) -> Result<Self> {
        if n < 2 || !(r_min > 0.0) || !(r_max > r_min) {
            return Err(Error::InvalidSamples(format!("bad sampling grid [{r_min}, {r_max}] with {n} points")));
        }
        let pts = log_grid(r_min, r_max, n).into_iter().map(|r| (r, f(r))).collect();
        Self::with_window(pts, (r_min, r_max))
    }

    pub fn validate(&self) -> Result<()> {
        let (lo, hi) = self.window;
        if !(lo > 0.0) || !(hi >= lo) {
            return Err(Error::InvalidSamples(format!("window ({lo}, {hi}) must be positive and ordered")));
        }
        for (i, &(r, v)) in self.points.iter().enumerate() {
            if !(r > 0.0) || !r.is_finite() || !v.is_finite() {
                return Err(Error::InvalidSamples(format!("sample {i} ({r}, {v}) is not a finite point with r > 0")));
            }
            if r < lo * (1.0 - 1e-12) || r > hi * (1.0 + 1e-12) {
                return Err(Error::InvalidSamples(format!("sample {i} at r = {r} lies outside the window")));
            }
            if i > 0 && !(r > self.points[i - 1].0) {
                return Err(Error::InvalidSamples(format!("radii must increase strictly (sample {i})")));
            }
        }
        Ok(())
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// Samples with `lo <= r <= hi`.
    pub fn restrict(&self, lo: f64, hi: f64) -> Result<RadialSamples> {
        let pts: Vec<_> = self.points.iter().copied().filter(|p| p.0 >= lo && p.0 <= hi).collect();
        if pts.is_empty() {
            return Err(Error::InvalidSamples(format!("no samples in [{lo}, {hi}]")));
        }
        Self::with_window(pts, (lo.max(self.window.0), hi.min(self.window.1)))
    }

    fn rms(&self) -> f64 {
        (self.points.iter().map(|p| p.1 * p.1).sum::<f64>() / self.len() as f64).sqrt()
    }
}

/// `n` log-spaced points from `lo` to `hi` inclusive.
pub fn log_grid(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    if n == 1 {
        return vec![lo];
    }
    let (a, b) = (lo.ln(), hi.ln());
    (0..n)
        .map(|i| {
            if i == 0 {
                lo
            } else if i == n - 1 {
                hi
            } else {
                (a + (b - a) * i as f64 / (n - 1) as f64).exp()
            }
        })
        .collect()
}

/// One expansion term `r^exponent (ln r)^log_power`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ExpansionTerm {
    pub exponent: f64,
    pub log_power: u8,
}

impl ExpansionTerm {
    pub const fn power(exponent: f64) -> Self {
        ExpansionTerm { exponent, log_power: 0 }
    }

    pub const fn log(exponent: f64) -> Self {
        ExpansionTerm { exponent, log_power: 1 }
    }

    #[inline]
    pub fn eval(&self, r: f64) -> f64 {
        let p = if self.exponent == 0.0 { 1.0 } else { r.powf(self.exponent) };
        if self.log_power == 1 {
            p * r.ln()
        } else {
            p
        }
    }
}

impl fmt::Display for ExpansionTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let pow = if self.exponent == 0.0 {
            None
        } else if self.exponent == 1.0 {
            Some("r".to_string())
        } else {
            Some(format!("r^{}", self.exponent))
        };
        match (pow, self.log_power) {
            (None, 0) => write!(f, "1"),
            (None, _) => write!(f, "ln"),
            (Some(p), 0) => write!(f, "{p}"),
            (Some(p), _) => write!(f, "{p}*ln"),
        }
    }
}

/// Distinct expansion terms sorted by `(exponent, log_power)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExpansionBasis {
    pub terms: Vec<ExpansionTerm>,
}

impl ExpansionBasis {
    pub fn new(mut terms: Vec<ExpansionTerm>) -> Result<Self> {
        if terms.is_empty() {
            return Err(Error::InvalidConfig("expansion basis is empty".into()));
        }
        for t in &terms {
            if !t.exponent.is_finite() || t.log_power > 1 {
                return Err(Error::InvalidConfig(format!("unsupported term {t}")));
            }
        }
        terms.sort_by(|a, b| a.exponent.total_cmp(&b.exponent).then(a.log_power.cmp(&b.log_power)));
        if terms.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::InvalidConfig("expansion terms must be distinct".into()));
        }
        Ok(ExpansionBasis { terms })
    }

    /// Parses a comma-separated list such as `ln,1,r,r^2,r^-1,r*ln`.
    pub fn parse(s: &str) -> Result<Self> {
        let mut terms = Vec::new();
        for tok in s.split(',').map(str::trim).filter(|t| !t.is_empty()) {
            let (pow, log) = match tok.strip_suffix("*ln") {
                Some(p) => (p, 1),
                None if tok == "ln" => ("1", 1),
                None => (tok, 0),
            };
            let exponent = match pow {
                "1" => 0.0,
                "r" => 1.0,
                p => p
                    .strip_prefix("r^")
                    .and_then(|e| e.parse::<f64>().ok())
                    .ok_or_else(|| Error::InvalidConfig(format!("cannot parse basis term '{tok}'")))?,
            };
            terms.push(ExpansionTerm { exponent, log_power: log });
        }
        Self::new(terms)
    }

    /// Index of `term`, if present.
    pub fn position(&self, term: ExpansionTerm) -> Option<usize> {
        self.terms.iter().position(|t| *t == term)
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }
}

impl fmt::Display for ExpansionBasis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.terms.iter().map(|t| t.to_string()).collect();
        write!(f, "{}", parts.join(","))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FitReport {
    pub coefficients: Vec<f64>,
    pub residual_rms: f64,
    pub condition_number: f64,
    /// Standard error of each coefficient from the residual variance.
    #[serde(skip_serializing, default)]
    pub standard_errors: Vec<f64>,
}

const MAX_CONDITION: f64 = 1e12;

/// Least-squares fit of `basis` to `samples`.
///
/// Columns are scaled to unit norm before the SVD; the reported condition
/// number is that of the scaled design matrix.
pub fn fit_expansion(samples: &RadialSamples, basis: &ExpansionBasis) -> Result<FitReport> {
    samples.validate()?;
    let n = samples.len();
    let p = basis.len();
    if n < 2 * p {
        return Err(Error::InvalidSamples(format!("{n} samples cannot support {p} terms (need {})", 2 * p)));
    }
    let mut x = DMatrix::from_fn(n, p, |i, j| basis.terms[j].eval(samples.points[i].0));
    let y = DVector::from_iterator(n, samples.points.iter().map(|pt| pt.1));
    let mut norms = vec![0.0; p];
    for j in 0..p {
        let nj = x.column(j).norm();
        if !(nj > 0.0) || !nj.is_finite() {
            return Err(Error::RankDeficient);
        }
        x.column_mut(j).scale_mut(1.0 / nj);
        norms[j] = nj;
    }
    let svd = x.clone().svd(true, true);
    let sv = &svd.singular_values;
    let smax = sv.max();
    let smin = sv.min();
    if !(smin > smax * f64::EPSILON * n as f64) {
        return Err(Error::RankDeficient);
    }
    let condition = smax / smin;
    if condition > MAX_CONDITION {
        return Err(Error::WindowTooNarrow { condition });
    }
    let u = svd.u.as_ref().expect("u requested");
    let vt = svd.v_t.as_ref().expect("v_t requested");
    let uty = u.transpose() * &y;
    let mut z = DVector::zeros(p);
    for k in 0..p {
        z[k] = uty[k] / sv[k];
    }
    let scaled = vt.transpose() * z;
    let resid = &y - &x * &scaled;
    let rss = resid.norm_squared();
    let residual_rms = (rss / n as f64).sqrt();
    let sigma2 = if n > p { rss / (n - p) as f64 } else { 0.0 };
    let mut coefficients = vec![0.0; p];
    let mut standard_errors = vec![0.0; p];
    for j in 0..p {
        coefficients[j] = scaled[j] / norms[j];
        // diag(V S^-2 V^T)
        let var: f64 = (0..p).map(|k| (vt[(k, j)] / sv[k]).powi(2)).sum();
        standard_errors[j] = (sigma2 * var).sqrt() / norms[j];
    }
    Ok(FitReport { coefficients, residual_rms, condition_number: condition, standard_errors })
}

/// Outcome of the two-model log test.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LogDetection {
    pub present: bool,
    pub coefficient: f64,
    pub stderr: f64,
    pub residual_without: f64,
    pub residual_with: f64,
}

/// Compares fits with bases `{1, r, r^2}` and `{ln r, 1, r, r^2}`.
///
/// A log term is reported when adding `ln r` lowers the residual by at least
/// 10x, the improvement exceeds `1e-9` of the sample rms, and the log
/// coefficient exceeds 5 standard errors.
pub fn detect_log_term(samples: &RadialSamples) -> Result<LogDetection> {
    let poly = ExpansionBasis::new(vec![ExpansionTerm::power(0.0), ExpansionTerm::power(1.0), ExpansionTerm::power(2.0)])?;
    let with_log = ExpansionBasis::new(vec![
        ExpansionTerm::log(0.0),
        ExpansionTerm::power(0.0),
        ExpansionTerm::power(1.0),
        ExpansionTerm::power(2.0),
    ])?;
    let f0 = fit_expansion(samples, &poly)?;
    let f1 = fit_expansion(samples, &with_log)?;
    let idx = with_log.position(ExpansionTerm::log(0.0)).expect("log term present");
    let coefficient = f1.coefficients[idx];
    let stderr = f1.standard_errors[idx];
    let improves = f0.residual_rms >= 10.0 * f1.residual_rms;
    let material = f0.residual_rms - f1.residual_rms > 1e-9 * samples.rms();
    let significant = coefficient.abs() > 5.0 * stderr;
    Ok(LogDetection {
        present: improves && material && significant,
        coefficient,
        stderr,
        residual_without: f0.residual_rms,
        residual_with: f1.residual_rms,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SmoothnessClass {
    pub p: f64,
    pub leading_exponent: f64,
    pub has_log: bool,
}

/// Candidate leading exponents.
pub const EXPONENT_CANDIDATES: [f64; 6] = [-2.0, -1.0, 0.0, 1.0, 2.0, 3.0];
const SNAP_TOLERANCE: f64 = 0.1;

fn regression_slope(xs: &[f64], ys: &[f64]) -> f64 {
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    sxy / sxx
}

/// Log-log slope of `|f|` over the smallest decade of the samples.
pub fn leading_slope(samples: &RadialSamples) -> Result<f64> {
    let r0 = samples.points[0].0;
    let decade: Vec<_> = samples.points.iter().filter(|p| p.0 <= 10.0 * r0 * (1.0 + 1e-12) && p.1 != 0.0).collect();
    if decade.len() < 2 {
        return Err(Error::InvalidSamples("fewer than two nonzero samples in the smallest decade".into()));
    }
    let xs: Vec<f64> = decade.iter().map(|p| p.0.ln()).collect();
    let ys: Vec<f64> = decade.iter().map(|p| p.1.abs().ln()).collect();
    Ok(regression_slope(&xs, &ys))
}

/// Snaps a slope to the nearest candidate exponent within 0.1.
pub fn snap_exponent(slope: f64) -> Result<f64> {
    let best = EXPONENT_CANDIDATES
        .iter()
        .copied()
        .min_by(|a, b| (a - slope).abs().total_cmp(&(b - slope).abs()))
        .expect("non-empty candidates");
    if (best - slope).abs() <= SNAP_TOLERANCE {
        Ok(best)
    } else {
        Err(Error::AmbiguousExponent { slope })
    }
}

/// Classifies the smoothness order of a sampled profile.
///
/// With `probe` (the profile as a function), the first and second
/// derivatives are estimated by central differences with step `r/100` at
/// each sample radius. Each normalized quotient `|f^(k)(r)| r^(k - e)` must not
/// grow by more than 2x from the second-smallest to the smallest decade.
pub fn classify_smoothness(samples: &RadialSamples, probe: Option<&dyn Fn(f64) -> f64>) -> Result<SmoothnessClass> {
    samples.validate()?;
    if samples.len() < 2 {
        return Err(Error::InvalidSamples("need at least two samples".into()));
    }
    let r0 = samples.points[0].0;
    let r1 = samples.points[samples.len() - 1].0;
    if r1 < 100.0 * r0 * (1.0 - 1e-12) {
        return Err(Error::InvalidSamples(format!("samples span {:.3} decades, need at least 2", (r1 / r0).log10())));
    }
    let slope = leading_slope(samples)?;
    let e = snap_exponent(slope)?;
    let has_log = e == 0.0 && detect_log_term(samples)?.present;
    if let Some(f) = probe {
        check_derivative_bounds(samples, f, e)?;
    }
    Ok(SmoothnessClass { p: -3.0 - e, leading_exponent: e, has_log })
}

fn check_derivative_bounds(samples: &RadialSamples, f: &dyn Fn(f64) -> f64, e: f64) -> Result<()> {
    let r0 = samples.points[0].0;
    for order in 1..=2usize {
        let quotient = |r: f64| {
            let h = r / 100.0;
            let d = if order == 1 {
                (f(r + h) - f(r - h)) / (2.0 * h)
            } else {
                (f(r + h) - 2.0 * f(r) + f(r - h)) / (h * h)
            };
            d.abs() * r.powf(order as f64 - e)
        };
        let band = |lo: f64, hi: f64| {
            samples
                .points
                .iter()
                .filter(|p| p.0 >= lo * (1.0 - 1e-12) && p.0 <= hi * (1.0 + 1e-12))
                .map(|p| quotient(p.0))
                .fold(0.0f64, f64::max)
        };
        let near = band(r0, 10.0 * r0);
        let next = band(10.0 * r0, 100.0 * r0);
        let ratio = if next > 0.0 { near / next } else if near > 0.0 { f64::INFINITY } else { 1.0 };
        if !(ratio <= 2.0) {
            return Err(Error::DerivativeBound { order, expected_exponent: e - order as f64, ratio });
        }
    }
    Ok(())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum DiagramVariant {
    Direct,
    Exchange,
    #[serde(rename = "2p1h-self-energy")]
    TwoParticleOneHole,
}

impl DiagramVariant {
    /// Model singular profile of the diagram's kernel along the diagonal.
    pub fn model_profile(self) -> fn(f64) -> f64 {
        match self {
            DiagramVariant::Direct => |r| r * (-r * r).exp(),
            DiagramVariant::Exchange => |r| r.powi(3) * (-r * r).exp(),
            DiagramVariant::TwoParticleOneHole => |r| r.ln() * (-r * r).exp(),
        }
    }
}

impl fmt::Display for DiagramVariant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            DiagramVariant::Direct => "direct",
            DiagramVariant::Exchange => "exchange",
            DiagramVariant::TwoParticleOneHole => "2p1h-self-energy",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FeynmanEntry {
    pub order: u32,
    pub variant: DiagramVariant,
    pub p: f64,
}

/// Smoothness orders of the first- and second-order diagrams.
pub fn feynman_table() -> Vec<FeynmanEntry> {
    vec![
        FeynmanEntry { order: 1, variant: DiagramVariant::Direct, p: -4.0 },
        FeynmanEntry { order: 1, variant: DiagramVariant::Exchange, p: -6.0 },
        FeynmanEntry { order: 2, variant: DiagramVariant::TwoParticleOneHole, p: -3.0 },
    ]
}

/// Sampling window for classifying the model profiles; narrow enough at the
/// bottom that the `ln r` slope `1/ln r` stays within the snap tolerance.
pub const CLASSIFY_WINDOW: (f64, f64) = (1e-6, 1e-3);

/// Classifies each table entry's model profile, with derivative probing.
pub fn feynman_table_validated() -> Result<Vec<(FeynmanEntry, SmoothnessClass)>> {
    feynman_table()
        .into_iter()
        .map(|entry| {
            let f = entry.variant.model_profile();
            let s = RadialSamples::from_fn(f, CLASSIFY_WINDOW.0, CLASSIFY_WINDOW.1, 60)?;
            let class = classify_smoothness(&s, Some(&f))?;
            Ok((entry, class))
        })
        .collect()
}

/// `C^inf` cutoff: 1 for `r <= cutoff/2`, 0 for `r >= cutoff`.
pub fn smooth_bump(r: f64, cutoff: f64) -> f64 {
    let psi = |y: f64| if y > 0.0 { (-1.0 / y).exp() } else { 0.0 };
    let t = (r - 0.5 * cutoff) / (0.5 * cutoff);
    if t <= 0.0 {
        1.0
    } else if t >= 1.0 {
        0.0
    } else {
        let a = psi(1.0 - t);
        a / (a + psi(t))
    }
}

/// Splits samples into a compactly supported singular part (bump times
/// input) and the smooth remainder.
pub fn split_singular_smooth(samples: &RadialSamples, cutoff_radius: f64) -> Result<(RadialSamples, RadialSamples)> {
    samples.validate()?;
    let (lo, hi) = samples.window;
    if !(cutoff_radius >= lo && cutoff_radius <= hi) {
        return Err(Error::Precondition(format!("cutoff {cutoff_radius} outside the sample window [{lo}, {hi}]")));
    }
    let mut sing = Vec::with_capacity(samples.len());
    let mut smooth = Vec::with_capacity(samples.len());
    for &(r, v) in &samples.points {
        let chi = smooth_bump(r, cutoff_radius);
        let s = chi * v;
        sing.push((r, s));
        smooth.push((r, v - s));
    }
    Ok((RadialSamples::with_window(sing, samples.window)?, RadialSamples::with_window(smooth, samples.window)?))
}
