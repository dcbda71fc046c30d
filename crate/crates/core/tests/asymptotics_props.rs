use contracted_kernels::asymptotics::*;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};

fn suite() -> Vec<(&'static str, fn(f64) -> f64)> {
    vec![
        ("1/r", |r| (-r * r).exp() / r),
        ("ln r", |r| r.ln() * (-r * r).exp()),
        ("1", |r| (-r * r).exp()),
        ("r", |r| r * (-r * r).exp()),
        ("r^2", |r| r * r * (-r * r).exp()),
        ("r^3", |r| r.powi(3) * (-r * r).exp()),
    ]
}

proptest! {
    #[test]
    fn fit_is_exact_on_basis_data(c0 in -5.0f64..5.0, c1 in -5.0f64..5.0, c2 in -5.0f64..5.0, c3 in -5.0f64..5.0, lo_exp in -5.0f64..-2.0) {
        let basis = ExpansionBasis::parse("ln,1,r,r^2").unwrap();
        let coefs = [c1, c0, c2, c3]; // sorted order: 1, ln, r, r^2
        let f = |r: f64| basis.terms.iter().zip(&coefs).map(|(t, c)| c * t.eval(r)).sum::<f64>();
        let s = RadialSamples::from_fn(f, 10f64.powf(lo_exp), 0.5, 30).unwrap();
        let norm = (s.points.iter().map(|p| p.1 * p.1).sum::<f64>()).sqrt();
        let fit = fit_expansion(&s, &basis).unwrap();
        prop_assert!(fit.residual_rms * (s.len() as f64).sqrt() <= 1e-10 * norm.max(1e-300) + 1e-300);
        prop_assert!(fit.condition_number >= 1.0);
    }

    #[test]
    fn classification_is_scale_equivariant(idx in 0usize..6, scale in 1e-6f64..1e6) {
        let (_, f) = suite()[idx];
        let s = RadialSamples::from_fn(f, 1e-6, 1e-3, 50).unwrap();
        let scaled = RadialSamples::new(s.points.iter().map(|&(r, v)| (r, scale * v)).collect()).unwrap();
        prop_assert_eq!(classify_smoothness(&s, None).unwrap(), classify_smoothness(&scaled, None).unwrap());
    }

    #[test]
    fn classification_is_window_stable(idx in 0usize..6, top in 1e-3f64..1e-2) {
        let (_, f) = suite()[idx];
        let wide = RadialSamples::from_fn(f, 1e-6, top, 60).unwrap();
        let narrow = RadialSamples::from_fn(f, 1e-6, top / 2.0, 60).unwrap();
        let a = classify_smoothness(&wide, None).unwrap();
        let b = classify_smoothness(&narrow, None).unwrap();
        prop_assert_eq!(a.leading_exponent, b.leading_exponent);
    }

    #[test]
    fn split_then_refit_keeps_singular_coefficients(k in 0.1f64..5.0, c in -3.0f64..3.0, cutoff in 0.2f64..1.0) {
        let f = |r: f64| k * r.ln() + c + 0.3 * r;
        let s = RadialSamples::from_fn(f, 1e-4, 2.0, 80).unwrap();
        let basis = ExpansionBasis::parse("ln,1,r").unwrap();
        let before = fit_expansion(&s.restrict(1e-4, cutoff / 2.0).unwrap(), &basis).unwrap();
        let (sing, smooth) = split_singular_smooth(&s, cutoff).unwrap();
        let after = fit_expansion(&sing.restrict(1e-4, cutoff / 2.0).unwrap(), &basis).unwrap();
        let i = basis.position(ExpansionTerm::log(0.0)).unwrap();
        prop_assert!(((after.coefficients[i] - before.coefficients[i]) / before.coefficients[i]).abs() < 1e-6);
        for ((p, q), o) in sing.points.iter().zip(&smooth.points).zip(&s.points) {
            prop_assert!((p.1 + q.1 - o.1).abs() <= 4.0 * f64::EPSILON * o.1.abs());
            if p.0 >= cutoff {
                prop_assert_eq!(p.1, 0.0);
            }
        }
    }
}

#[test]
fn log_detection_on_suite_with_noise() {
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
    for trial in 0..20 {
        for (name, f) in suite() {
            let s = RadialSamples::from_fn(f, 1e-6, 1e-3, 60).unwrap();
            let noisy = RadialSamples::new(
                s.points.iter().map(|&(r, v)| (r, v * (1.0 + 0.01 * (2.0 * rng.random::<f64>() - 1.0)))).collect(),
            )
            .unwrap();
            let class = classify_smoothness(&noisy, None).unwrap();
            assert_eq!(class.has_log, name == "ln r", "trial {trial}, {name}");
        }
    }
}

#[test]
fn no_false_positives_on_polynomials() {
    for k in 0..4 {
        for (lo, hi) in [(1e-6, 1e-3), (1e-4, 1e-2), (1e-2, 1.0)] {
            let s = RadialSamples::from_fn(|r| 1.5 * r.powi(k) + 0.25, lo, hi, 40).unwrap();
            assert!(!detect_log_term(&s).unwrap().present, "r^{k} on [{lo}, {hi}]");
        }
    }
}

#[test]
fn leading_inverse_power_masks_log() {
    let f = |r: f64| 1.0 / r + r.ln();
    let s = RadialSamples::from_fn(f, 1e-6, 1e-3, 60).unwrap();
    let c = classify_smoothness(&s, Some(&f)).unwrap();
    assert_eq!((c.p, c.leading_exponent, c.has_log), (-2.0, -1.0, false));
}

#[test]
fn table_is_fixed() {
    let t = feynman_table();
    let got: Vec<(u32, String, f64)> = t.iter().map(|e| (e.order, e.variant.to_string(), e.p)).collect();
    assert_eq!(
        got,
        vec![(1, "direct".into(), -4.0), (1, "exchange".into(), -6.0), (2, "2p1h-self-energy".into(), -3.0)]
    );
}
