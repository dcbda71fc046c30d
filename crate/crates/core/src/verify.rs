//! Acceptance checks. Each check reports a measured value, its target, the
//! tolerance and a pass flag; [`run_suite`] collects them for the CLI.
//!
//! Quadrature tolerances passed in can only tighten the pinned per-check
//! tolerances, never loosen them. Pass thresholds are fixed.

use std::f64::consts::PI;
use std::time::Instant;

use serde::Serialize;

use crate::asymptotics::{classify_smoothness, fit_expansion, ExpansionBasis, ExpansionTerm, RadialSamples, CLASSIFY_WINDOW};
use crate::contraction::*;
use crate::error::Result;
use crate::kernels::Vec3;
use crate::oracle;
use crate::quadrature::QuadConfig;
use crate::specfun;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Skipped,
}

#[derive(Debug, Clone, Serialize)]
pub struct CheckReport {
    pub id: u8,
    pub name: &'static str,
    pub status: Status,
    pub measured: f64,
    pub target: f64,
    pub tolerance: f64,
    pub seconds: f64,
    pub detail: String,
    pub error: Option<String>,
}

impl CheckReport {
    pub fn passed(&self) -> bool {
        self.status == Status::Pass
    }

    /// One-line summary, `PASS [ 1] name: measured ... `.
    pub fn line(&self) -> String {
        let tag = match self.status {
            Status::Pass => "PASS",
            Status::Fail => "FAIL",
            Status::Skipped => "SKIP",
        };
        let mut s = format!(
            "{tag} [{:>2}] {}: measured {:.6e}, target {:.6e}, tolerance {:.1e} ({:.2} s)",
            self.id, self.name, self.measured, self.target, self.tolerance, self.seconds
        );
        if !self.detail.is_empty() {
            s.push_str(" | ");
            s.push_str(&self.detail);
        }
        if let Some(e) = &self.error {
            s.push_str(" | error: ");
            s.push_str(e);
        }
        s
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct VerifyReport {
    pub checks: Vec<CheckReport>,
    pub failures: usize,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VerifyOptions {
    pub quad: QuadConfig,
    pub seed: u64,
    pub include_slow: bool,
    /// Monte Carlo samples per radius in the cusp check.
    pub mc_samples: usize,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        VerifyOptions { quad: QuadConfig::default(), seed: 20_240_601, include_slow: false, mc_samples: 2_000_000 }
    }
}

impl VerifyOptions {
    /// Pinned configuration, tightened by the caller's tolerances.
    fn quad(&self, rel_tol: f64) -> QuadConfig {
        QuadConfig {
            rel_tol: rel_tol.min(self.quad.rel_tol),
            abs_tol: self.quad.abs_tol.min(1e-300),
            max_evals: self.quad.max_evals.max(400_000),
        }
    }
}

/// `(id, name, slow)` for every criterion.
pub const CRITERIA: [(u8, &str, bool); 11] = [
    (1, "example2 closed form vs quadrature", false),
    (2, "example2 log coefficient fit", false),
    (3, "mollifier integral beta limit", false),
    (4, "psi0 dual representation", false),
    (5, "psi0 diagonal cap at small r", false),
    (6, "psi0 large-beta limit at r = 0.5", false),
    (7, "fig1 table properties", false),
    (8, "i1 log coefficient fit", false),
    (9, "smoothness classification table", false),
    (10, "special functions vs oracles", false),
    (11, "cusp slope and exchange equivalence", true),
];

struct Outcome {
    measured: f64,
    target: f64,
    tolerance: f64,
    pass: bool,
    detail: String,
}

fn rel(a: f64, b: f64) -> f64 {
    ((a - b) / b).abs()
}

fn strictly_decreasing(xs: &[f64]) -> bool {
    xs.windows(2).all(|w| w[1] < w[0])
}

fn fmt_list(xs: &[f64]) -> String {
    let parts: Vec<String> = xs.iter().map(|x| format!("{x:.4e}")).collect();
    format!("[{}]", parts.join(", "))
}

fn check_1(o: &VerifyOptions) -> Result<Outcome> {
    let cfg = o.quad(1e-12);
    let start = Instant::now();
    let mut worst: f64 = 0.0;
    for rho in [0.1, 0.5, 1.0, 2.0] {
        let c = contracted_coulomb_2d_closed(rho)?;
        let q = contracted_coulomb_2d_quad(rho, &cfg)?.value;
        worst = worst.max(rel(q, c));
    }
    let secs = start.elapsed().as_secs_f64();
    Ok(Outcome {
        measured: worst,
        target: 0.0,
        tolerance: 1e-9,
        pass: worst <= 1e-9 && secs < 1.0,
        detail: format!("max relative difference over rho in {{0.1, 0.5, 1, 2}}; runtime {secs:.3} s (limit 1 s)"),
    })
}

fn check_2(_: &VerifyOptions) -> Result<Outcome> {
    let s = RadialSamples::from_fn(|r| contracted_coulomb_2d_closed(r).unwrap_or(f64::NAN), 1e-4, 1e-2, 40)?;
    let basis = ExpansionBasis::parse("ln,1,r^2")?;
    let fit = fit_expansion(&s, &basis)?;
    let c = fit.coefficients[basis.position(ExpansionTerm::log(0.0)).expect("log term")];
    let target = example2_log_coefficient();
    Ok(Outcome {
        measured: c,
        target,
        tolerance: 0.01,
        pass: rel(c, target) <= 0.01,
        detail: format!("relative error {:.3e}, residual {:.2e}", rel(c, target), fit.residual_rms),
    })
}

fn check_3(o: &VerifyOptions) -> Result<Outcome> {
    let cfg = o.quad(1e-12);
    let lim = appendix_i_beta_limit(1.0)?;
    let mut errs = Vec::new();
    for beta in [1e2, 1e3, 1e4, 1e5] {
        errs.push(rel(appendix_i_beta(1.0, beta, &cfg)?.value, lim));
    }
    let last = errs[3];
    let mono = strictly_decreasing(&errs);
    Ok(Outcome {
        measured: last,
        target: 0.0,
        tolerance: 5e-3,
        pass: last <= 5e-3 && mono,
        detail: format!("errors at beta 1e2..1e5 {}; strictly decreasing: {mono}", fmt_list(&errs)),
    })
}

fn check_4(o: &VerifyOptions) -> Result<Outcome> {
    let closed_cfg = o.quad(1e-10);
    let quad_cfg = o.quad(1e-9);
    let start = Instant::now();
    let mut worst: f64 = 0.0;
    for beta in [10.0, 1e3] {
        for r in [0.05, 0.3, 1.0] {
            let p = Psi0Params::new(r, beta, 1.0)?;
            let c = psi0_closed(&p, &closed_cfg)?.value;
            let q = psi0_quad2d(&p, &quad_cfg)?.value;
            worst = worst.max(rel(q, c));
        }
    }
    let secs = start.elapsed().as_secs_f64();
    Ok(Outcome {
        measured: worst,
        target: 0.0,
        tolerance: 1e-6,
        pass: worst <= 1e-6 && secs < 10.0,
        detail: format!("max relative difference over beta in {{10, 1e3}}, r in {{0.05, 0.3, 1}}; runtime {secs:.2} s (limit 10 s)"),
    })
}

fn check_5(o: &VerifyOptions) -> Result<Outcome> {
    let v = psi0_closed(&Psi0Params::new(1e-4, 1e3, 1.0)?, &o.quad(1e-10))?.value;
    let ratio = v / psi0_limit_r0(1e3, 1.0);
    let exact = psi0_limit_r0_exact(1e3, 1.0)? / psi0_limit_r0(1e3, 1.0);
    Ok(Outcome {
        measured: ratio,
        target: 1.0,
        tolerance: 0.01,
        pass: (ratio - 1.0).abs() <= 0.01,
        detail: format!("ratio to 2 pi^2 beta; exact r -> 0 value gives ratio {exact:.6}"),
    })
}

fn check_6(o: &VerifyOptions) -> Result<Outcome> {
    let cfg = o.quad(1e-10);
    let r: f64 = 0.5;
    let mut devs = Vec::new();
    for beta in [1e4, 1e5, 1e6] {
        let v = psi0_closed(&Psi0Params::new(r, beta, 1.0)?, &cfg)?.value;
        devs.push((v * r * r * (r * r).exp() / (PI * PI) - 1.0).abs());
    }
    let mono = strictly_decreasing(&devs);
    let exact = psi0_limit_beta_inf_exact(r, 1.0, &cfg)?.value / psi0_limit_beta_inf(r, 1.0);
    Ok(Outcome {
        measured: devs[2],
        target: 0.0,
        tolerance: 0.05,
        pass: mono && devs[2] <= 0.05,
        detail: format!(
            "deviations at beta 1e4..1e6 {}; strictly decreasing: {mono}; exact beta -> inf limit / leading term = {exact:.6}",
            fmt_list(&devs)
        ),
    })
}

/// Figure properties: (a) cap within 5% of `2 pi^2 beta` for `r <= 0.01`,
/// (b) `beta = 3000` closer to the leading limit than `beta = 1000` for
/// `r >= 0.3`, (c) Taylor order 3 within 5% of `beta = 1000` on `[0.3, 1]`.
///
/// The table starts at `r = 0.05`, so (a) is also evaluated off-table at
/// `r in {1e-4, 1e-3, 1e-2}` with the routine that fills the table.
fn check_7(o: &VerifyOptions) -> Result<Outcome> {
    let cfg = o.quad(1e-10);
    let rows = fig1_rows(FIG1_R_RANGE.0, FIG1_R_RANGE.1, FIG1_POINTS, 1.0, &cfg)?;

    let mut cap_worst: f64 = 0.0;
    let mut cap_points = 0;
    for row in rows.iter().filter(|row| row.r <= 0.01) {
        for (k, &beta) in FIG1_BETAS.iter().enumerate() {
            cap_worst = cap_worst.max(rel(row.psi[k], psi0_limit_r0(beta, 1.0)));
            cap_points += 1;
        }
    }
    for r in [1e-4, 1e-3, 1e-2] {
        for &beta in &FIG1_BETAS {
            let v = psi0_closed(&Psi0Params::new(r, beta, 1.0)?, &cfg)?.value;
            cap_worst = cap_worst.max(rel(v, psi0_limit_r0(beta, 1.0)));
            cap_points += 1;
        }
    }
    let a_ok = cap_worst <= 0.05;

    let tail: Vec<_> = rows.iter().filter(|row| row.r >= 0.3).collect();
    let b_bad = tail.iter().filter(|row| (row.psi[2] - row.psi_inf).abs() >= (row.psi[0] - row.psi_inf).abs()).count();
    let b_ok = b_bad == 0;

    let mid: Vec<_> = rows.iter().filter(|row| row.r >= 0.3 && row.r <= 1.0).collect();
    let mut c_worst: f64 = 0.0;
    for row in &mid {
        let t3 = row.taylor[2].unwrap_or(f64::NAN);
        let e = rel(t3, row.psi[0]);
        c_worst = if e.is_nan() { f64::INFINITY } else { c_worst.max(e) };
    }
    let c_ok = c_worst <= 0.05;

    let failed = [a_ok, b_ok, c_ok].iter().filter(|ok| !**ok).count();
    Ok(Outcome {
        measured: failed as f64,
        target: 0.0,
        tolerance: 0.0,
        pass: failed == 0,
        detail: format!(
            "(a) cap max rel error {cap_worst:.4} over {cap_points} points: {}; (b) {b_bad}/{} rows with r >= 0.3 not closer at beta 3000: {}; (c) taylor3 max rel error {c_worst:.4} on [0.3, 1]: {}",
            ok(a_ok),
            tail.len(),
            ok(b_ok),
            ok(c_ok)
        ),
    })
}

fn ok(b: bool) -> &'static str {
    if b {
        "pass"
    } else {
        "fail"
    }
}

fn check_8(_: &VerifyOptions) -> Result<Outcome> {
    let s = RadialSamples::from_fn(|a| i1_asymptotic(a, 1.0).unwrap_or(f64::NAN), 1e-3, 1e-1, 40)?;
    let basis = ExpansionBasis::parse("ln,1,r,r^2")?;
    let fit = fit_expansion(&s, &basis)?;
    let c = fit.coefficients[basis.position(ExpansionTerm::log(0.0)).expect("log term")];
    let target = i1_log_coefficient(1.0);
    Ok(Outcome {
        measured: c,
        target,
        tolerance: 0.01,
        pass: rel(c, target) <= 0.01,
        detail: format!("relative error {:.3e}, residual {:.2e}", rel(c, target), fit.residual_rms),
    })
}

/// Model profiles `{1/r, ln r, r, r^3} exp(-r^2)` with their expected orders.
pub fn classification_profiles() -> [(&'static str, fn(f64) -> f64, f64); 4] {
    [
        ("exp(-r^2)/r", |r| (-r * r).exp() / r, -2.0),
        ("ln(r) exp(-r^2)", |r| r.ln() * (-r * r).exp(), -3.0),
        ("r exp(-r^2)", |r| r * (-r * r).exp(), -4.0),
        ("r^3 exp(-r^2)", |r| r.powi(3) * (-r * r).exp(), -6.0),
    ]
}

fn check_9(_: &VerifyOptions) -> Result<Outcome> {
    let mut wrong = 0;
    let mut parts = Vec::new();
    for (name, f, p) in classification_profiles() {
        let s = RadialSamples::from_fn(f, CLASSIFY_WINDOW.0, CLASSIFY_WINDOW.1, 60)?;
        let got = classify_smoothness(&s, Some(&f))?.p;
        if got != p {
            wrong += 1;
        }
        parts.push(format!("{name} -> {got}"));
    }
    Ok(Outcome {
        measured: wrong as f64,
        target: 0.0,
        tolerance: 0.0,
        pass: wrong == 0,
        detail: parts.join(", "),
    })
}

fn linspace(a: f64, b: f64, n: usize) -> Vec<f64> {
    (0..n).map(|i| a + (b - a) * i as f64 / (n - 1) as f64).collect()
}

fn logspace(a: f64, b: f64, n: usize) -> Vec<f64> {
    crate::asymptotics::log_grid(a, b, n)
}

/// Worst relative error of each special function against its oracle on a
/// 50-point grid, and the Dawson / parabolic-cylinder identity on `[0, 5]`.
pub fn special_function_errors() -> Result<Vec<(&'static str, f64)>> {
    let worst = |xs: Vec<f64>, f: &dyn Fn(f64) -> Result<f64>, g: &dyn Fn(f64) -> f64| -> Result<f64> {
        let mut w: f64 = 0.0;
        for x in xs {
            w = w.max(rel(f(x)?, g(x)));
        }
        Ok(w)
    };
    let k = |nu: f64| move |x: f64| oracle::bessel_k_integral(nu, x);
    Ok(vec![
        ("dawson", worst(linspace(-10.0, 10.0, 50), &|x| Ok(specfun::dawson(x)), &oracle::dawson_integral)?),
        ("pcf_v_mhalf", worst(linspace(0.1, 10.0, 50), &specfun::pcf_v_mhalf, &oracle::pcf_v_mhalf_integral)?),
        ("erf", worst(linspace(-5.0, 5.0, 50), &|x| Ok(specfun::erf(x)), &oracle::erf_integral)?),
        ("erfc", worst(linspace(0.0, 10.0, 50), &|x| Ok(specfun::erfc(x)), &oracle::erfc_craig)?),
        ("exp_integral_e1", worst(logspace(1e-4, 50.0, 50), &specfun::exp_integral_e1, &oracle::e1_integral)?),
        ("bessel_k0", worst(logspace(1e-3, 50.0, 50), &specfun::bessel_k0, &k(0.0))?),
        ("bessel_k1", worst(logspace(1e-3, 50.0, 50), &specfun::bessel_k1, &k(1.0))?),
        ("bessel_k2", worst(logspace(1e-3, 50.0, 50), &specfun::bessel_k2, &k(2.0))?),
        (
            "bessel_k0_scaled",
            worst(logspace(1e-3, 50.0, 50), &specfun::bessel_k0_scaled, &|x| x.exp() * oracle::bessel_k_integral(0.0, x))?,
        ),
        (
            "dawson/pcf identity",
            worst(linspace(0.1, 5.0, 50), &specfun::pcf_v_mhalf, &|t| {
                2.0 / PI.sqrt() * (0.25 * t * t).exp() * specfun::dawson(t / std::f64::consts::SQRT_2)
            })?,
        ),
    ])
}

fn check_10(_: &VerifyOptions) -> Result<Outcome> {
    let errs = special_function_errors()?;
    let mut worst: f64 = 0.0;
    let mut pass = true;
    let mut parts = Vec::new();
    for (name, e) in &errs {
        let tol = if name.contains("identity") { 1e-12 } else { 1e-10 };
        pass &= *e <= tol;
        worst = worst.max(*e);
        parts.push(format!("{name} {e:.1e}"));
    }
    Ok(Outcome { measured: worst, target: 0.0, tolerance: 1e-10, pass, detail: parts.join(", ") })
}

fn check_11(o: &VerifyOptions) -> Result<Outcome> {
    let b = Vec3::ZERO;
    let beta = 25.0;
    let cusp = cusp_expansion_check(b, beta, Vec3::ZERO, &DEFAULT_CUSP_RHOS, DEFAULT_C12, o.mc_samples, o.seed)?;
    let slope_err = rel(cusp.slope_estimate, cusp.slope_predicted);
    let ex = exchange_leading_equivalence(b, beta, DEFAULT_C12, o.mc_samples, o.seed)?;
    let pass = slope_err <= 0.15 && ex.agree();
    Ok(Outcome {
        measured: cusp.slope_estimate,
        target: cusp.slope_predicted,
        tolerance: 0.15,
        pass,
        detail: format!(
            "slope {:.4} +- {:.4} (relative error {slope_err:.3}); direct {:.5} +- {:.5}, exchange {:.5} +- {:.5}, agree within 2x combined stderr: {}",
            cusp.slope_estimate,
            cusp.stderr,
            ex.direct_leading.value,
            ex.direct_leading.stderr,
            ex.exchange_leading.value,
            ex.exchange_leading.stderr,
            ex.agree()
        ),
    })
}

/// Runs criterion `id` (1 to 11).
pub fn run_check(id: u8, opts: &VerifyOptions) -> CheckReport {
    let (_, name, _) = CRITERIA[(id as usize).saturating_sub(1).min(CRITERIA.len() - 1)];
    let start = Instant::now();
    let out = match id {
        1 => check_1(opts),
        2 => check_2(opts),
        3 => check_3(opts),
        4 => check_4(opts),
        5 => check_5(opts),
        6 => check_6(opts),
        7 => check_7(opts),
        8 => check_8(opts),
        9 => check_9(opts),
        10 => check_10(opts),
        11 => check_11(opts),
        _ => Err(crate::Error::InvalidConfig(format!("no criterion {id}"))),
    };
    let seconds = start.elapsed().as_secs_f64();
    match out {
        Ok(o) => CheckReport {
            id,
            name,
            status: if o.pass { Status::Pass } else { Status::Fail },
            measured: o.measured,
            target: o.target,
            tolerance: o.tolerance,
            seconds,
            detail: o.detail,
            error: None,
        },
        Err(e) => CheckReport {
            id,
            name,
            status: Status::Fail,
            measured: f64::NAN,
            target: f64::NAN,
            tolerance: f64::NAN,
            seconds,
            detail: String::new(),
            error: Some(e.to_string()),
        },
    }
}

/// Runs every criterion; slow ones are skipped unless requested.
pub fn run_suite(opts: &VerifyOptions) -> VerifyReport {
    let checks: Vec<CheckReport> = CRITERIA
        .iter()
        .map(|&(id, name, slow)| {
            if slow && !opts.include_slow {
                CheckReport {
                    id,
                    name,
                    status: Status::Skipped,
                    measured: f64::NAN,
                    target: f64::NAN,
                    tolerance: f64::NAN,
                    seconds: 0.0,
                    detail: "slow; enable with --include-slow".into(),
                    error: None,
                }
            } else {
                run_check(id, opts)
            }
        })
        .collect();
    let failures = checks.iter().filter(|c| c.status == Status::Fail).count();
    VerifyReport { checks, failures }
}
