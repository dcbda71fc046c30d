//! Expansion fits, log-term detection, smoothness classes, the diagram table
//! and the smooth-bump split of a singular profile.

use contracted_kernels::asymptotics::{
    classify_smoothness, detect_log_term, feynman_table_validated, fit_expansion, split_singular_smooth, ExpansionBasis, RadialSamples,
    CLASSIFY_WINDOW,
};

fn main() -> contracted_kernels::Result<()> {
    let (lo, hi) = CLASSIFY_WINDOW;
    let profiles: [(&str, fn(f64) -> f64); 4] = [
        ("r^-2", |r| 1.0 / (r * r) + 1.0),
        ("ln r", |r| r.ln() + 2.0 * r),
        ("r", |r| r - r * r),
        ("r^3", |r| r.powi(3) * (1.0 + r)),
    ];
    for (name, f) in profiles {
        let s = RadialSamples::from_fn(f, lo, hi, 64)?;
        let c = classify_smoothness(&s, Some(&f))?;
        let d = detect_log_term(&s)?;
        println!("{name:<5} p = {:>2}  leading r^{}  log {:<5} (detector {})", c.p, c.leading_exponent, c.has_log, d.present);
    }

    let s = RadialSamples::from_fn(|r| 2.0 * r.ln() - 0.5 + 3.0 * r, 1e-4, 1e-1, 50)?;
    let basis = ExpansionBasis::parse("ln,1,r,r^2")?;
    let fit = fit_expansion(&s, &basis)?;
    println!("\nbasis {basis}: {:?}  rms {:.1e}  cond {:.1e}", fit.coefficients, fit.residual_rms, fit.condition_number);

    println!("\norder variant                 p");
    for (e, c) in feynman_table_validated()? {
        println!("{:>5} {:<20} {:>3}  (classified {})", e.order, e.variant.to_string(), e.p, c.p);
    }

    let wide = RadialSamples::from_fn(|r| r.ln() * (-r * r).exp(), 1e-3, 2.0, 80)?;
    let (singular, smooth) = split_singular_smooth(&wide, 0.5)?;
    let tail = smooth.points.iter().filter(|(r, _)| *r < 0.25).map(|(_, v)| v.abs()).fold(0.0, f64::max);
    println!("\nsplit at 0.5: {} + {} samples, smooth part below r = 0.25 is {tail:e}", singular.len(), smooth.len());
    Ok(())
}
