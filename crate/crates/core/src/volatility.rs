//! Kernel estimate of the unconditional volatility path from absolute LAD
//! residuals, with leave-one-out cross-validated bandwidth.
//!
//! `sigma_hat_t = sum_s w_{t,s} |u_s|`, where `w_{t,s}` is proportional to
//! `k((t - s) / (n h))` and normalized to sum to one over `s`. The
//! normalization also takes care of the boundaries.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::par;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum KernelSpec {
    #[default]
    Gaussian,
    Epanechnikov,
    Uniform,
}

impl KernelSpec {
    /// Kernel density; each integrates to one.
    pub fn eval(self, u: f64) -> f64 {
        match self {
            KernelSpec::Gaussian => (-0.5 * u * u).exp() / (2.0 * std::f64::consts::PI).sqrt(),
            KernelSpec::Epanechnikov => {
                if u.abs() <= 1.0 {
                    0.75 * (1.0 - u * u)
                } else {
                    0.0
                }
            }
            KernelSpec::Uniform => {
                if u.abs() <= 1.0 {
                    0.5
                } else {
                    0.0
                }
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VolatilityEstimate {
    pub sigma_hat: Vec<f64>,
    pub bandwidth_h: f64,
    pub kernel: KernelSpec,
}

/// Kernel values indexed by lag `|t - s|`. The kernel is symmetric so one
/// row of length `n` covers every pair.
fn lag_kernel(n: usize, h: f64, kernel: KernelSpec) -> Vec<f64> {
    let scale = n as f64 * h;
    (0..n).map(|d| kernel.eval(d as f64 / scale)).collect()
}

fn check_bandwidth(h: f64) -> Result<()> {
    if h > 0.0 && h <= 1.0 {
        Ok(())
    } else {
        Err(Error::InvalidBandwidth(h))
    }
}

/// The smoother itself only needs two points (one left out, one kept); the
/// length floor of the test pipeline is enforced upstream.
fn check_residuals(abs_resid: &[f64]) -> Result<()> {
    if abs_resid.len() < 2 {
        return Err(Error::InsufficientLength { len: abs_resid.len(), min: 2 });
    }
    if abs_resid.iter().all(|&a| a == 0.0) {
        return Err(Error::DegenerateResiduals);
    }
    Ok(())
}

/// Normalized weights `w_{t,.}` for a single `t`.
pub fn weights_at(t: usize, n: usize, h: f64, kernel: KernelSpec) -> Vec<f64> {
    let k = lag_kernel(n, h, kernel);
    let row: Vec<f64> = (0..n).map(|s| k[t.abs_diff(s)]).collect();
    let total: f64 = row.iter().sum();
    row.into_iter().map(|v| v / total).collect()
}

pub fn estimate_volatility(
    abs_resid: &[f64],
    h: f64,
    kernel: KernelSpec,
) -> Result<VolatilityEstimate> {
    check_residuals(abs_resid)?;
    check_bandwidth(h)?;
    let n = abs_resid.len();
    let k = lag_kernel(n, h, kernel);

    let sigma_hat: Vec<f64> = (0..n)
        .map(|t| {
            let (mut num, mut den) = (0.0, 0.0);
            for (s, a) in abs_resid.iter().enumerate() {
                let w = k[t.abs_diff(s)];
                num += w * a;
                den += w;
            }
            num / den
        })
        .collect();

    if let Some(index) = sigma_hat.iter().position(|&s| !(s > 0.0)) {
        return Err(Error::ZeroVolatility { index });
    }
    Ok(VolatilityEstimate {
        sigma_hat,
        bandwidth_h: h,
        kernel,
    })
}

/// Leave-one-out estimates `sigma_hat_{-t}(h)`. Entries are `None` when no
/// other observation carries positive weight (compact kernels, tiny `h`).
pub fn leave_one_out(abs_resid: &[f64], h: f64, kernel: KernelSpec) -> Vec<Option<f64>> {
    let n = abs_resid.len();
    let k = lag_kernel(n, h, kernel);
    (0..n)
        .map(|t| {
            let (mut num, mut den) = (0.0, 0.0);
            for (s, a) in abs_resid.iter().enumerate() {
                if s != t {
                    let w = k[t.abs_diff(s)];
                    num += w * a;
                    den += w;
                }
            }
            (den > 0.0).then(|| num / den)
        })
        .collect()
}

/// Cross-validation criterion `sum_t (|u_t| - sigma_hat_{-t}(h))^2`;
/// infinite when some leave-one-out estimate is undefined.
pub fn cv_criterion(abs_resid: &[f64], h: f64, kernel: KernelSpec) -> f64 {
    leave_one_out(abs_resid, h, kernel)
        .into_iter()
        .zip(abs_resid)
        .map(|(loo, a)| match loo {
            Some(s) => (a - s) * (a - s),
            None => f64::INFINITY,
        })
        .sum()
}

const GRID_CONSTANTS: [f64; 9] = [0.25, 0.35, 0.5, 0.7, 1.0, 1.4, 2.0, 2.8, 4.0];

/// `c * n^{-1/5}` over a geometric set of constants, clipped to one.
pub fn default_grid(n: usize) -> Vec<f64> {
    let base = (n as f64).powf(-0.2);
    GRID_CONSTANTS.iter().map(|c| (c * base).min(1.0)).collect()
}

pub fn cv_bandwidth(abs_resid: &[f64], kernel: KernelSpec, grid: &[f64]) -> Result<f64> {
    if grid.is_empty() {
        return Err(Error::EmptyGrid);
    }
    check_residuals(abs_resid)?;
    for &h in grid {
        check_bandwidth(h)?;
    }

    let scores = par::map_indexed(grid.len(), |i| cv_criterion(abs_resid, grid[i], kernel));
    let mut best = 0;
    for i in 1..grid.len() {
        let better = scores[i] < scores[best];
        let tie_smaller = scores[i] == scores[best] && grid[i] < grid[best];
        if better || tie_smaller {
            best = i;
        }
    }
    Ok(grid[best])
}
