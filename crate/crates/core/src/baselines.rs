//! Least-squares M statistics (MZ_alpha, MSB, MZ_t), usable on observed or
//! bootstrap series so that the block bootstrap can supply their p-values.

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::bootstrap::{bootstrap_p_value, prepare, pseudo_series, VolatilitySource};
use crate::config::{TestConfig, TestResult};
use crate::error::{require_len, Error, Result};
use crate::gls::{gls_adjust, DeterministicSpec};
use crate::ols::ols;
use crate::par;
use crate::seed::derive_seed;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MStats {
    pub mz_alpha: f64,
    pub msb: f64,
    pub mz_t: f64,
    /// Autoregressive long-run variance `sigma^2 / (1 - sum beta_i)^2`.
    pub s_ar2: f64,
    pub lag_p: usize,
}

/// M statistics of `y` with pre-sample value `y_0 = 0`. The long-run
/// variance comes from the OLS regression
/// `dy_t = b0 y_{t-1} + sum_{i<=p} b_i dy_{t-i} + e_t` over `t = p+1..T`,
/// with the residual variance taken as RSS over the number of rows.
pub fn m_statistics(y: &[f64], lag_p: usize) -> Result<MStats> {
    require_len(y.len())?;
    let t_len = y.len();
    if t_len < lag_p + 10 {
        return Err(Error::InsufficientLength {
            len: t_len,
            min: lag_p + 10,
        });
    }

    // levels[t] = y_t for t = 0..=T with y_0 = 0.
    let mut levels = Vec::with_capacity(t_len + 1);
    levels.push(0.0);
    levels.extend_from_slice(y);
    let diff = |t: usize| levels[t] - levels[t - 1];

    let rows = t_len - lag_p;
    let mut design = DMatrix::zeros(rows, lag_p + 1);
    let mut response = DVector::zeros(rows);
    for (r, t) in (lag_p + 1..=t_len).enumerate() {
        response[r] = diff(t);
        design[(r, 0)] = levels[t - 1];
        for i in 1..=lag_p {
            design[(r, i)] = diff(t - i);
        }
    }
    let fit = ols(&design, &response)?;
    let sigma2 = fit.residuals.norm_squared() / rows as f64;
    let beta_sum: f64 = fit.beta.iter().skip(1).sum();
    let denom = 1.0 - beta_sum;
    if denom.abs() < 1e-6 {
        return Err(Error::NearUnitDenominator);
    }
    let s_ar2 = sigma2 / (denom * denom);

    let t = t_len as f64;
    let lagged_ss: f64 = levels[..t_len].iter().map(|v| v * v).sum();
    let scaled_ss = lagged_ss / (t * t);
    let last = levels[t_len];
    let mz_alpha = (last * last / t - s_ar2) / (2.0 * scaled_ss);
    let msb = (scaled_ss / s_ar2).sqrt();
    Ok(MStats {
        mz_alpha,
        msb,
        mz_t: mz_alpha * msb,
        s_ar2,
        lag_p,
    })
}

fn mz_alpha_of(series: &[f64], spec: &DeterministicSpec, lag_p: usize) -> Result<f64> {
    let adjusted = gls_adjust(series, spec)?.adjusted;
    Ok(m_statistics(&adjusted, lag_p)?.mz_alpha)
}

/// Block bootstrap test based on `MZ_alpha`: pseudo series are produced
/// exactly as for the LAD statistics, only the statistic differs.
pub fn abb_m_test(x: &[f64], cfg: &TestConfig, lag_p: usize) -> Result<TestResult> {
    let setup = prepare(x, cfg, &VolatilitySource::FromConfig)?;
    let observed = m_statistics(&setup.adjusted, lag_p)?.mz_alpha;

    let draws = par::try_map_indexed(cfg.replications, |j| {
        let series = pseudo_series(&setup, derive_seed(cfg.seed, j as u64))?;
        mz_alpha_of(&series, &setup.spec, lag_p)
    })?;

    let mut result = crate::bootstrap::abb::result_skeleton(&setup, cfg);
    result.statistic.mz = Some(observed);
    result.p_value.mz = Some(bootstrap_p_value(&draws, observed));
    result.draws.mz = draws;
    result.lag_p = Some(lag_p);
    result.refresh_decisions();
    Ok(result)
}
