//! Coefficient and t-ratio statistics of the LAD unit root regression.

use serde::{Deserialize, Serialize};

use crate::error::{require_len, require_same_len, Error, Result};
use crate::lad::{regression_pairs, LadFit};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct StatPair {
    /// `n (gamma_hat - 1)` with `n` the number of regression observations.
    pub l_stat: f64,
    /// `2 f0_hat sqrt(centered_ss) (gamma_hat - 1)`.
    pub t_stat: f64,
    pub f0_hat: f64,
    /// Centered sum of squares of the lagged regressor, `Y'_{-1} P_C Y_{-1}`.
    pub centered_ss: f64,
    pub gamma_hat: f64,
    pub n_obs: usize,
    /// Set when the lagged regressor is constant, which forces `t_stat = 0`.
    pub lagged_degenerate: bool,
}

fn phi(x: f64) -> f64 {
    (-0.5 * x * x).exp() / (2.0 * std::f64::consts::PI).sqrt()
}

/// Linear-interpolation sample quantile of sorted data.
fn quantile_sorted(sorted: &[f64], p: f64) -> f64 {
    let pos = p * (sorted.len() - 1) as f64;
    let lo = pos.floor() as usize;
    let hi = pos.ceil() as usize;
    sorted[lo] + (pos - lo as f64) * (sorted[hi] - sorted[lo])
}

/// Silverman's rule `0.9 min(sd, IQR/1.34) n^{-1/5}`. When only one of the
/// two spread measures vanishes the other one is used.
pub fn silverman_bandwidth(data: &[f64]) -> Result<f64> {
    let n = data.len() as f64;
    let mean = data.iter().sum::<f64>() / n;
    let sd = (data.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0)).sqrt();
    let mut sorted = data.to_vec();
    sorted.sort_by(f64::total_cmp);
    let iqr = quantile_sorted(&sorted, 0.75) - quantile_sorted(&sorted, 0.25);

    let spread = match (sd > 0.0, iqr > 0.0) {
        (true, true) => sd.min(iqr / 1.34),
        (true, false) => sd,
        (false, true) => iqr / 1.34,
        (false, false) => return Err(Error::ZeroBandwidth),
    };
    Ok(0.9 * spread * n.powf(-0.2))
}

/// Gaussian kernel density estimate at zero with bandwidth `b`.
pub fn density_at_zero_with_bandwidth(data: &[f64], b: f64) -> f64 {
    data.iter().map(|x| phi(x / b)).sum::<f64>() / (data.len() as f64 * b)
}

pub fn density_at_zero(std_resid: &[f64]) -> Result<f64> {
    require_len(std_resid.len())?;
    let b = silverman_bandwidth(std_resid)?;
    Ok(density_at_zero_with_bandwidth(std_resid, b))
}

/// Statistics for the regression series `y` (already demeaned or detrended
/// when a deterministic component is present) given its LAD fit and the
/// volatility path used to standardize the residuals.
pub fn compute_stats(y: &[f64], fit: &LadFit, sigma: &[f64]) -> Result<StatPair> {
    let (lagged, _) = regression_pairs(y, fit.lag_start())?;
    require_same_len(lagged.len(), fit.residuals.len())?;
    require_same_len(sigma.len(), fit.residuals.len())?;

    let n_obs = fit.residuals.len();
    let gamma_hat = fit.gamma_hat;
    let std_resid: Vec<f64> = fit
        .residuals
        .iter()
        .zip(sigma)
        .map(|(u, s)| u / s)
        .collect();
    let f0_hat = density_at_zero(&std_resid)?;

    let lagged_degenerate = lagged.iter().all(|&v| v == lagged[0]);
    let centered_ss = if lagged_degenerate {
        0.0
    } else {
        let mean = lagged.iter().sum::<f64>() / n_obs as f64;
        lagged.iter().map(|v| (v - mean).powi(2)).sum()
    };

    let l_stat = n_obs as f64 * (gamma_hat - 1.0);
    let t_stat = 2.0 * f0_hat * centered_ss.sqrt() * (gamma_hat - 1.0);
    Ok(StatPair {
        l_stat,
        t_stat,
        f0_hat,
        centered_ss,
        gamma_hat,
        n_obs,
        lagged_degenerate,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lad::lad_fit;

    #[test]
    fn two_point_closed_form() {
        let f = density_at_zero_with_bandwidth(&[-1.0, 1.0], 1.0);
        assert!((f - 0.241_970_724_519_143_37).abs() < 1e-15);
    }

    #[test]
    fn off_centre_direct_sum() {
        let f = density_at_zero_with_bandwidth(&[0.5, 1.5], 1.0);
        let oracle = 0.5 * ((-0.125f64).exp() + (-1.125f64).exp()) / (2.0 * std::f64::consts::PI).sqrt();
        assert!((f - oracle).abs() < 1e-15);
        assert!(f < phi(0.0));
    }

    #[test]
    fn zero_spread_has_no_bandwidth() {
        assert_eq!(density_at_zero(&[1.0; 10]), Err(Error::ZeroBandwidth));
        // sd positive but IQR zero still works.
        let mut d = vec![0.0; 10];
        d[9] = 5.0;
        assert!(density_at_zero(&d).unwrap() > 0.0);
    }

    #[test]
    fn quantiles_interpolate() {
        let s = [1.0, 2.0, 3.0, 4.0];
        assert_eq!(quantile_sorted(&s, 0.25), 1.75);
        assert_eq!(quantile_sorted(&s, 0.75), 3.25);
    }

    #[test]
    fn definitional_arithmetic() {
        // gamma_hat = 0.95 with 100 regression observations gives L = -5.
        let y: Vec<f64> = (0..100).map(|i| (i as f64 * 0.37).sin() + 2.0).collect();
        let mut fit = lad_fit(&y, 1).unwrap();
        fit.gamma_hat = 0.95;
        let s = compute_stats(&y, &fit, &vec![1.0; 100]).unwrap();
        assert!((s.l_stat + 5.0).abs() < 1e-12);

        fit.gamma_hat = 1.0;
        let s = compute_stats(&y, &fit, &vec![1.0; 100]).unwrap();
        assert_eq!(s.l_stat, 0.0);
        assert_eq!(s.t_stat, 0.0);
    }

    #[test]
    fn t_stat_reconstructs() {
        let y: Vec<f64> = (0..60).map(|i| (i as f64 * 0.91).cos() * (1.0 + i as f64 / 30.0)).collect();
        let fit = lad_fit(&y, 2).unwrap();
        let sigma = vec![0.7; fit.residuals.len()];
        let s = compute_stats(&y, &fit, &sigma).unwrap();
        let again = 2.0 * s.f0_hat * s.centered_ss.sqrt() * (s.gamma_hat - 1.0);
        assert!((again - s.t_stat).abs() <= 1e-12 * (1.0 + s.t_stat.abs()));
        assert_eq!(s.n_obs, 59);
    }

    #[test]
    fn sigma_length_checked() {
        let y: Vec<f64> = (0..20).map(|i| i as f64 + (i as f64).sin()).collect();
        let fit = lad_fit(&y, 1).unwrap();
        assert!(matches!(
            compute_stats(&y, &fit, &[1.0; 19]),
            Err(Error::LengthMismatch { .. })
        ));
    }
}
