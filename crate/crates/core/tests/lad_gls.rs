use heterour_core::gls::quasi_difference;
use heterour_core::seed::rng_from_seed;
use heterour_core::{gls_adjust, lad_fit, lad_objective, DeterministicSpec};
use proptest::prelude::*;
use rand::Rng;
use rand_distr::StandardNormal;

fn random_walk(n: usize, seed: u64) -> Vec<f64> {
    let mut rng = rng_from_seed(seed);
    let mut level = 0.0;
    (0..n)
        .map(|_| {
            level += rng.sample::<f64, _>(StandardNormal);
            level
        })
        .collect()
}

/// Minimum of the piecewise-linear objective over its kinks.
fn breakpoint_scan(y: &[f64], lag_start: usize) -> f64 {
    let pairs: Vec<(f64, f64)> = match lag_start {
        1 => std::iter::once(0.0).chain(y.iter().copied()).zip(y.iter().copied()).collect(),
        _ => y.windows(2).map(|w| (w[0], w[1])).collect(),
    };
    pairs
        .iter()
        .filter(|(x, _)| *x != 0.0)
        .map(|(x, v)| v / x)
        .map(|g| pairs.iter().map(|(x, v)| (v - g * x).abs()).sum::<f64>())
        .fold(f64::INFINITY, f64::min)
}

#[test]
fn weighted_median_attains_scan_minimum() {
    let mut rng = rng_from_seed(11);
    for case in 0..200u64 {
        let n = rng.random_range(10..=50);
        let y = random_walk(n, 1000 + case);
        for lag_start in [1, 2] {
            let fit = lad_fit(&y, lag_start).unwrap();
            let scan = breakpoint_scan(&y, lag_start);
            assert!(
                (fit.objective - scan).abs() <= 1e-9 * scan.max(1.0),
                "case {case}: {} vs {scan}",
                fit.objective
            );
            let direct = lad_objective(&y, fit.gamma_hat, lag_start).unwrap();
            assert!((direct - fit.objective).abs() <= 1e-12 * direct.max(1.0));
        }
    }
}

proptest! {
    #[test]
    fn power_of_two_scaling_is_exact(seed in 0u64..10_000, k in -20i32..20) {
        let y = random_walk(30, seed);
        let c = 2f64.powi(k);
        let scaled: Vec<f64> = y.iter().map(|v| v * c).collect();
        let a = lad_fit(&y, 1).unwrap();
        let b = lad_fit(&scaled, 1).unwrap();
        prop_assert_eq!(a.gamma_hat, b.gamma_hat);
        for (u, v) in a.residuals.iter().zip(&b.residuals) {
            prop_assert_eq!(u * c, *v);
        }
    }

    #[test]
    fn sign_flip_keeps_gamma(seed in 0u64..10_000, lag_start in 1usize..=2) {
        let y = random_walk(25, seed);
        let flipped: Vec<f64> = y.iter().map(|v| -v).collect();
        let a = lad_fit(&y, lag_start).unwrap();
        let b = lad_fit(&flipped, lag_start).unwrap();
        prop_assert_eq!(a.gamma_hat, b.gamma_hat);
        for (u, v) in a.residuals.iter().zip(&b.residuals) {
            prop_assert_eq!(-u, *v);
        }
    }
}

#[test]
fn constant_series_demeans_to_zero() {
    let x = vec![4.25; 40];
    let fit = gls_adjust(&x, &DeterministicSpec::mean()).unwrap();
    assert!((fit.mu_hat[0] - 4.25).abs() < 1e-12);
    assert!(fit.adjusted.iter().all(|v| v.abs() < 1e-12));
}

#[test]
fn linear_trend_detrends_to_zero() {
    let x: Vec<f64> = (1..=60).map(|t| 2.5 - 0.75 * t as f64).collect();
    let fit = gls_adjust(&x, &DeterministicSpec::trend()).unwrap();
    assert!(fit.adjusted.iter().all(|v| v.abs() <= 1e-10));
    assert!((fit.mu_hat[0] - 2.5).abs() < 1e-9);
    assert!((fit.mu_hat[1] + 0.75).abs() < 1e-9);
}

/// Two-regressor OLS by explicit 2x2 inversion.
fn ols2(rows: &[(f64, f64, f64)]) -> (f64, f64) {
    let (mut s11, mut s12, mut s22, mut r1, mut r2) = (0.0, 0.0, 0.0, 0.0, 0.0);
    for &(a, b, y) in rows {
        s11 += a * a;
        s12 += a * b;
        s22 += b * b;
        r1 += a * y;
        r2 += b * y;
    }
    let det = s11 * s22 - s12 * s12;
    ((s22 * r1 - s12 * r2) / det, (s11 * r2 - s12 * r1) / det)
}

#[test]
fn detrending_matches_direct_two_variable_ols() {
    for seed in 0..20 {
        let x = random_walk(80, seed);
        let n = x.len();
        let c_bar = 13.5;
        let rho = 1.0 - c_bar / n as f64;
        let mut rows = vec![(1.0, 1.0, x[0])];
        for t in 2..=n {
            rows.push((1.0 - rho, t as f64 - rho * (t - 1) as f64, x[t - 1] - rho * x[t - 2]));
        }
        let (b0, b1) = ols2(&rows);
        let fit = gls_adjust(&x, &DeterministicSpec::trend()).unwrap();
        assert!((fit.mu_hat[0] - b0).abs() <= 1e-8 * b0.abs().max(1.0));
        assert!((fit.mu_hat[1] - b1).abs() <= 1e-8 * b1.abs().max(1.0));
        for (t, v) in fit.adjusted.iter().enumerate() {
            let oracle = x[t] - b0 - b1 * (t + 1) as f64;
            assert!((v - oracle).abs() <= 1e-8);
        }
    }
}

#[test]
fn demeaning_matches_closed_form() {
    let x = random_walk(50, 4);
    let n = x.len();
    let rho = 1.0 - 7.0 / n as f64;
    let num = x[0] + (1.0 - rho) * (1..n).map(|t| x[t] - rho * x[t - 1]).sum::<f64>();
    let den = 1.0 + (n - 1) as f64 * (1.0 - rho).powi(2);
    let fit = gls_adjust(&x, &DeterministicSpec::mean()).unwrap();
    assert!((fit.mu_hat[0] - num / den).abs() < 1e-10);
}

#[test]
fn gls_is_affine_equivariant() {
    let x = random_walk(70, 9);
    let shifted: Vec<f64> = x.iter().enumerate().map(|(t, v)| 3.0 * v + 5.0 - 0.2 * (t + 1) as f64).collect();
    let a = gls_adjust(&x, &DeterministicSpec::trend()).unwrap();
    let b = gls_adjust(&shifted, &DeterministicSpec::trend()).unwrap();
    for (u, v) in a.adjusted.iter().zip(&b.adjusted) {
        assert!((3.0 * u - v).abs() < 1e-8);
    }
}

#[test]
fn normal_equations_hold() {
    for spec in [DeterministicSpec::mean(), DeterministicSpec::trend()] {
        let x = random_walk(120, 17);
        let (design, response) = quasi_difference(&x, &spec);
        let fit = gls_adjust(&x, &spec).unwrap();
        let beta = nalgebra::DVector::from_vec(fit.mu_hat.clone());
        let resid = response - &design * beta;
        let grad = design.transpose() * resid;
        assert!(grad.amax() <= 1e-8, "{grad}");
    }
}
