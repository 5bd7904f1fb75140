//! Adaptive block bootstrap.
//!
//! Standardized residuals are resampled in blocks from a sign-augmented pool,
//! rescaled by the volatility path and cumulated into unit root pseudo
//! series. Block starts are drawn uniformly from
//! `W = {-n, ..., -1-b} ∪ {1, ..., n-b}`; a positive start `i` copies
//! `e_i, e_{i+1}, ...` and a negative start `i` copies
//! `-e_{i+n+1}, -e_{i+n+2}, ...`, so the first element of a block is uniform
//! on `{±e_1, ..., ±e_{n-b}}`.

pub(crate) mod abb;
mod block_length;

pub use abb::{
    abb_test, abb_test_infeasible, abb_test_with_volatility, bootstrap_p_value, lad_statistics,
    prepare, pseudo_series, AbbSetup, VolatilitySource,
};
pub use block_length::{hhj_block_length, mbb_variance, HhjParams};

use rand::Rng as _;
use serde::{Deserialize, Serialize};

use crate::error::{require_same_len, Error, Result};
use crate::seed::rng_from_seed;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct AbbPlan {
    pub block_len_b: usize,
    pub n_resid: usize,
    pub k_blocks: usize,
    pub index_set_size: usize,
}

impl AbbPlan {
    pub fn new(n_resid: usize, block_len_b: usize) -> Result<Self> {
        if block_len_b < 1 || block_len_b >= n_resid {
            return Err(Error::InvalidBlockLength {
                block: block_len_b,
                pool: n_resid,
            });
        }
        Ok(Self {
            block_len_b,
            n_resid,
            k_blocks: (n_resid - 1) / block_len_b,
            index_set_size: 2 * (n_resid - block_len_b),
        })
    }

    /// Member `u` (0-based) of the index set `W`, positive half first.
    pub fn index_member(&self, u: usize) -> i64 {
        let half = self.n_resid - self.block_len_b;
        debug_assert!(u < 2 * half);
        if u < half {
            u as i64 + 1
        } else {
            -(self.n_resid as i64) + (u - half) as i64
        }
    }

    /// Every member of `W` in increasing position order.
    pub fn index_set(&self) -> Vec<i64> {
        (0..self.index_set_size).map(|u| self.index_member(u)).collect()
    }
}

pub fn standardize_residuals(resid: &[f64], sigma: &[f64]) -> Result<Vec<f64>> {
    require_same_len(resid.len(), sigma.len())?;
    if let Some(index) = sigma.iter().position(|&s| !(s > 0.0)) {
        return Err(Error::ZeroVolatility { index });
    }
    Ok(resid.iter().zip(sigma).map(|(u, s)| u / s).collect())
}

/// `k_blocks + 1` block starts drawn independently and uniformly from `W`.
pub fn draw_block_indices(plan: &AbbPlan, rng_seed: u64) -> Vec<i64> {
    let mut rng = rng_from_seed(rng_seed);
    (0..=plan.k_blocks)
        .map(|_| plan.index_member(rng.random_range(0..plan.index_set_size)))
        .collect()
}

/// Pseudo errors `e*_t`, `t = 1..n`: observation `t` sits in block
/// `m = (t-1) / b` at offset `s = t - m b - 1`.
pub fn build_pseudo_errors(std_resid: &[f64], indices: &[i64], plan: &AbbPlan) -> Result<Vec<f64>> {
    let n = plan.n_resid;
    let b = plan.block_len_b;
    require_same_len(std_resid.len(), n)?;
    require_same_len(indices.len(), plan.k_blocks + 1)?;
    let max = n - 1;

    (1..=n)
        .map(|t| {
            let m = (t - 1) / b;
            let s = (t - m * b - 1) as i64;
            let start = indices[m];
            let (pos, sign) = if start > 0 {
                (start + s, 1.0)
            } else {
                (start + s + n as i64 + 1, -1.0)
            };
            if pos < 1 || pos as usize > max {
                return Err(Error::IndexOutOfPool { index: pos, max });
            }
            Ok(sign * std_resid[pos as usize - 1])
        })
        .collect()
}

/// `y*_t = y*_{t-1} + sigma_t e*_t` with `y*_0 = 0`; returns `y*_1..y*_n`.
pub fn build_pseudo_series(pseudo_err: &[f64], sigma: &[f64]) -> Result<Vec<f64>> {
    require_same_len(pseudo_err.len(), sigma.len())?;
    let mut level = 0.0;
    Ok(pseudo_err
        .iter()
        .zip(sigma)
        .map(|(e, s)| {
            level += s * e;
            level
        })
        .collect())
}
