//! GLS demeaning and detrending by quasi-differencing.
//!
//! With `rho = 1 - c_bar / T`, the quasi-differenced response is
//! `x_t - rho x_{t-1}` and the regressor is `d_t - rho d_{t-1}` for
//! `t = 2..T`; the first row keeps `x_1` on `d_1`. OLS on that system gives
//! `mu_hat`, and the adjusted series is `x_t - mu_hat' d_t`.

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::error::{require_len, Result};
use crate::ols::ols;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum DeterministicKind {
    None,
    Mean,
    Trend,
}

impl DeterministicKind {
    pub fn default_c_bar(self) -> f64 {
        match self {
            DeterministicKind::None => 0.0,
            DeterministicKind::Mean => 7.0,
            DeterministicKind::Trend => 13.5,
        }
    }

    /// Number of deterministic regressors.
    pub fn dim(self) -> usize {
        match self {
            DeterministicKind::None => 0,
            DeterministicKind::Mean => 1,
            DeterministicKind::Trend => 2,
        }
    }

    /// First regression index for the LAD fit on the adjusted series.
    pub fn lag_start(self) -> usize {
        match self {
            DeterministicKind::None => 1,
            DeterministicKind::Mean | DeterministicKind::Trend => 2,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DeterministicSpec {
    pub kind: DeterministicKind,
    pub c_bar: f64,
}

impl DeterministicSpec {
    pub fn new(kind: DeterministicKind) -> Self {
        Self {
            kind,
            c_bar: kind.default_c_bar(),
        }
    }

    pub fn with_c_bar(kind: DeterministicKind, c_bar: f64) -> Self {
        Self { kind, c_bar }
    }

    pub fn none() -> Self {
        Self::new(DeterministicKind::None)
    }

    pub fn mean() -> Self {
        Self::new(DeterministicKind::Mean)
    }

    pub fn trend() -> Self {
        Self::new(DeterministicKind::Trend)
    }
}

impl Default for DeterministicSpec {
    fn default() -> Self {
        Self::none()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct GlsFit {
    pub mu_hat: Vec<f64>,
    pub adjusted: Vec<f64>,
}

fn deterministic_row(kind: DeterministicKind, t: usize) -> [f64; 2] {
    match kind {
        DeterministicKind::Trend => [1.0, t as f64],
        _ => [1.0, 0.0],
    }
}

/// Quasi-differenced design and response. Exposed so tests can check the
/// normal equations directly.
pub fn quasi_difference(x: &[f64], spec: &DeterministicSpec) -> (DMatrix<f64>, DVector<f64>) {
    let n = x.len();
    let k = spec.kind.dim();
    let rho = 1.0 - spec.c_bar / n as f64;
    let mut design = DMatrix::zeros(n, k);
    let mut response = DVector::zeros(n);
    for t in 1..=n {
        let d = deterministic_row(spec.kind, t);
        if t == 1 {
            response[0] = x[0];
            for j in 0..k {
                design[(0, j)] = d[j];
            }
        } else {
            let d_prev = deterministic_row(spec.kind, t - 1);
            response[t - 1] = x[t - 1] - rho * x[t - 2];
            for j in 0..k {
                design[(t - 1, j)] = d[j] - rho * d_prev[j];
            }
        }
    }
    (design, response)
}

pub fn gls_adjust(x: &[f64], spec: &DeterministicSpec) -> Result<GlsFit> {
    require_len(x.len())?;
    if spec.kind == DeterministicKind::None {
        return Ok(GlsFit {
            mu_hat: Vec::new(),
            adjusted: x.to_vec(),
        });
    }

    let (design, response) = quasi_difference(x, spec);
    let fit = ols(&design, &response)?;
    let mu_hat: Vec<f64> = fit.beta.iter().copied().collect();
    let adjusted = x
        .iter()
        .enumerate()
        .map(|(i, &v)| {
            let d = deterministic_row(spec.kind, i + 1);
            v - mu_hat.iter().zip(d).map(|(m, dj)| m * dj).sum::<f64>()
        })
        .collect();
    Ok(GlsFit { mu_hat, adjusted })
}
