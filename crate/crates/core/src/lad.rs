//! Exact least absolute deviations fit of the through-origin AR(1) regression
//! `y_t = gamma * y_{t-1} + u_t`.
//!
//! The criterion `sum_t |y_t - gamma y_{t-1}|` equals
//! `sum_t |y_{t-1}| * |y_t / y_{t-1} - gamma|` plus terms that do not depend
//! on `gamma`, so its minimizer is the weighted median of the ratios
//! `y_t / y_{t-1}` with weights `|y_{t-1}|`.

use serde::{Deserialize, Serialize};

use crate::error::{require_len, Error, Result};

/// Lagged regressors with magnitude below this are treated as zero.
pub const LAG_FLOOR: f64 = 1e-30;

pub fn sgn(x: f64) -> i8 {
    (x > 0.0) as i8 - (x < 0.0) as i8
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LadFit {
    pub gamma_hat: f64,
    pub residuals: Vec<f64>,
    pub objective: f64,
    /// 1-based inclusive range of `t` covered by the regression.
    pub t_range: (usize, usize),
}

impl LadFit {
    pub fn lag_start(&self) -> usize {
        self.t_range.0
    }

    pub fn n_obs(&self) -> usize {
        self.residuals.len()
    }
}

/// Lagged regressor and response for `t = lag_start..=T`. With
/// `lag_start == 1` the pre-sample value `y_0` is taken to be zero.
pub fn regression_pairs(y: &[f64], lag_start: usize) -> Result<(Vec<f64>, Vec<f64>)> {
    match lag_start {
        1 => {
            let mut lagged = Vec::with_capacity(y.len());
            lagged.push(0.0);
            lagged.extend_from_slice(&y[..y.len().saturating_sub(1)]);
            Ok((lagged, y.to_vec()))
        }
        2 => {
            if y.is_empty() {
                return Ok((Vec::new(), Vec::new()));
            }
            Ok((y[..y.len() - 1].to_vec(), y[1..].to_vec()))
        }
        other => Err(Error::InvalidLagStart(other)),
    }
}

pub fn lad_objective(y: &[f64], gamma: f64, lag_start: usize) -> Result<f64> {
    let (lagged, current) = regression_pairs(y, lag_start)?;
    Ok(objective_of(&lagged, &current, gamma))
}

fn objective_of(lagged: &[f64], current: &[f64], gamma: f64) -> f64 {
    lagged
        .iter()
        .zip(current)
        .map(|(x, y)| (y - gamma * x).abs())
        .sum()
}

pub fn lad_fit(y: &[f64], lag_start: usize) -> Result<LadFit> {
    require_len(y.len())?;
    let (lagged, current) = regression_pairs(y, lag_start)?;

    let mut points: Vec<(f64, f64)> = lagged
        .iter()
        .zip(&current)
        .filter(|(x, _)| x.abs() >= LAG_FLOOR)
        .map(|(x, y)| (y / x, x.abs()))
        .collect();
    if points.is_empty() {
        return Err(Error::AllLagsZero);
    }

    let gamma_hat = weighted_median(&mut points);
    let residuals: Vec<f64> = lagged
        .iter()
        .zip(&current)
        .map(|(x, y)| y - gamma_hat * x)
        .collect();
    let objective = residuals.iter().map(|u| u.abs()).sum();

    Ok(LadFit {
        gamma_hat,
        residuals,
        objective,
        t_range: (lag_start, y.len()),
    })
}

/// Minimizer of `sum_i w_i |r_i - g|` over `g`. When the cumulative weight
/// reaches exactly half the total the criterion is flat between two
/// consecutive distinct points and the midpoint is returned.
///
/// `points` are `(value, weight)` pairs with positive weights; they are
/// sorted in place.
pub fn weighted_median(points: &mut [(f64, f64)]) -> f64 {
    assert!(!points.is_empty(), "weighted median of an empty set");
    points.sort_by(|a, b| a.0.total_cmp(&b.0));
    let total: f64 = points.iter().map(|p| p.1).sum();
    let half = 0.5 * total;

    let mut cum = 0.0;
    for (i, &(value, weight)) in points.iter().enumerate() {
        cum += weight;
        if cum > half {
            return value;
        }
        if cum == half {
            // Flat stretch up to the next distinct point.
            return match points[i + 1..].iter().find(|p| p.0 > value) {
                Some(next) => 0.5 * (value + next.0),
                None => value,
            };
        }
    }
    // Only reachable through rounding in `cum`.
    points[points.len() - 1].0
}
