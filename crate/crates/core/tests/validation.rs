use barrier_occupation::limit_laws::{g_cdf, gamma_cdf};
use barrier_occupation::validation::{check_prop_g_gamma, check_theorem1, check_theorem3, run_theorem1, Side};

#[test]
fn theorem1_report_is_reproducible() {
    let a = check_theorem1(0.5, 10.0, 300, 1.0 / 64.0, 3, 0.05).unwrap();
    let b = check_theorem1(0.5, 10.0, 300, 1.0 / 64.0, 3, 0.05).unwrap();
    assert_eq!(a, b);
    assert_eq!(a.n_samples, 300);
    assert!(check_theorem1(0.5, 5.0, 300, 1.0 / 64.0, 3, 0.05).is_err());
}

#[test]
fn theorem1_components_are_bounded_by_the_statistic() {
    let run = run_theorem1(-0.5, 10.0, 300, 1.0 / 64.0, 4).unwrap();
    let s = run.report.statistic;
    assert!(run.ks_last_zero <= s && run.ks_occupation <= s && run.ks_marginal <= s);
    assert!(run.acceptance_rate > 0.0 && run.acceptance_rate <= 1.0);
    assert_eq!(run.zero_fraction, 0.0);
}

#[test]
fn zero_start_identity_is_exact() {
    for k in 0..=20 {
        let u = k as f64 / 20.0;
        assert!((2.0 * g_cdf(0.0, u).unwrap() - u.sqrt()).abs() < 1e-12);
        assert!((gamma_cdf(0.0, u).unwrap() - u.sqrt()).abs() < 1e-15);
    }
}

#[test]
fn proposition_holds_at_moderate_size() {
    let n = 10_000;
    for &y in &[-1.0, 0.0, 1.0] {
        let r = check_prop_g_gamma(y, n, 8, 3.0 / (n as f64).sqrt()).unwrap();
        assert!(r.passed, "{r:?}");
    }
    assert!(check_prop_g_gamma(0.0, 999, 8, 0.1).is_err());
}

#[test]
fn far_start_examples() {
    assert!(check_theorem3(Side::Neg, -15.0, 0, 0.02).unwrap().passed);
    assert!(check_theorem3(Side::Pos, 30.0, 0, 0.02).unwrap().passed);
    assert!(check_theorem3(Side::Pos, 4.0, 0, 0.02).is_err());
    let stats: Vec<f64> = [5.0, 10.0, 20.0, 40.0]
        .iter()
        .map(|&y| check_theorem3(Side::Neg, -y, 0, 0.02).unwrap().statistic)
        .collect();
    assert!(stats.windows(2).all(|w| w[1] < w[0]), "{stats:?}");
}
