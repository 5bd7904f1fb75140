//! Test configuration and the serialized test result.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gls::{DeterministicKind, DeterministicSpec};
use crate::volatility::KernelSpec;

pub const SCHEMA_VERSION: u32 = 1;
pub const DEFAULT_REPLICATIONS: usize = 499;
pub const MIN_REPLICATIONS: usize = 19;
/// Levels at which the result records a decision.
pub const DECISION_LEVELS: [(&str, f64); 3] = [("0.01", 0.01), ("0.05", 0.05), ("0.10", 0.10)];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum StatChoice {
    Lt,
    Tt,
    Mz,
    #[default]
    All,
}

impl StatChoice {
    pub fn wants_lad(self) -> bool {
        !matches!(self, StatChoice::Mz)
    }

    pub fn wants_mz(self) -> bool {
        matches!(self, StatChoice::Mz | StatChoice::All)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum BandwidthChoice {
    #[default]
    Auto,
    Fixed(f64),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum BlockChoice {
    #[default]
    Auto,
    Fixed(usize),
}

/// How the volatility path used for standardization is obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum VolatilityMode {
    /// Kernel estimate from absolute LAD residuals.
    #[default]
    Kernel,
    /// Flat path at the mean absolute residual. Ignores heteroskedasticity;
    /// kept for ablation studies.
    Constant,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TestConfig {
    pub deterministic: DeterministicSpec,
    pub stat: StatChoice,
    /// Number of bootstrap replications `B`.
    pub replications: usize,
    pub alpha: f64,
    pub bandwidth: BandwidthChoice,
    pub block: BlockChoice,
    pub kernel: KernelSpec,
    pub volatility: VolatilityMode,
    pub seed: u64,
    /// Autoregressive lag order for the M statistics.
    pub lag_p: usize,
}

impl Default for TestConfig {
    fn default() -> Self {
        Self {
            deterministic: DeterministicSpec::none(),
            stat: StatChoice::All,
            replications: DEFAULT_REPLICATIONS,
            alpha: 0.05,
            bandwidth: BandwidthChoice::Auto,
            block: BlockChoice::Auto,
            kernel: KernelSpec::Gaussian,
            volatility: VolatilityMode::Kernel,
            seed: 0,
            lag_p: 0,
        }
    }
}

impl TestConfig {
    pub fn validate(&self) -> Result<()> {
        if self.replications < MIN_REPLICATIONS {
            return Err(Error::InvalidConfig(format!(
                "B = {} is below the minimum of {MIN_REPLICATIONS}",
                self.replications
            )));
        }
        if !(self.alpha > 0.0 && self.alpha <= 0.5) {
            return Err(Error::InvalidConfig(format!(
                "alpha = {} must lie in (0, 0.5]",
                self.alpha
            )));
        }
        if self.deterministic.kind != DeterministicKind::None && !(self.deterministic.c_bar > 0.0) {
            return Err(Error::InvalidConfig("c_bar must be positive".into()));
        }
        if let BandwidthChoice::Fixed(h) = self.bandwidth {
            if !(h > 0.0 && h <= 1.0) {
                return Err(Error::InvalidBandwidth(h));
            }
        }
        if self.block == BlockChoice::Fixed(0) {
            return Err(Error::InvalidConfig("block length must be positive".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
pub struct PerStat<T> {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub lt: Option<T>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub tt: Option<T>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub mz: Option<T>,
}

impl<T: Copy> PerStat<T> {
    pub fn map<U>(&self, f: impl Fn(T) -> U) -> PerStat<U> {
        PerStat {
            lt: self.lt.map(&f),
            tt: self.tt.map(&f),
            mz: self.mz.map(&f),
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct Draws {
    pub lt: Vec<f64>,
    pub tt: Vec<f64>,
    pub mz: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TestResult {
    pub schema: u32,
    pub statistic: PerStat<f64>,
    pub p_value: PerStat<f64>,
    pub b_used: usize,
    /// Bandwidth of the kernel volatility estimate; absent when the path was
    /// supplied or forced constant.
    pub h_used: Option<f64>,
    #[serde(rename = "B")]
    pub replications: usize,
    pub deterministic: DeterministicKind,
    pub c_bar: f64,
    pub seed: u64,
    pub alpha: f64,
    pub reject: PerStat<bool>,
    pub decision_at: BTreeMap<String, PerStat<bool>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub lag_p: Option<usize>,
    #[serde(skip)]
    pub draws: Draws,
}

impl TestResult {
    /// Fills `reject` and `decision_at` from the p-values.
    pub(crate) fn refresh_decisions(&mut self) {
        let alpha = self.alpha;
        self.reject = self.p_value.map(|p| p < alpha);
        self.decision_at = DECISION_LEVELS
            .iter()
            .map(|(key, level)| (key.to_string(), self.p_value.map(|p| p < *level)))
            .collect();
    }

    /// Adds the M statistic part of another result (same data, same seed).
    pub fn merge_mz(&mut self, other: &TestResult) {
        self.statistic.mz = other.statistic.mz;
        self.p_value.mz = other.p_value.mz;
        self.draws.mz = other.draws.mz.clone();
        self.lag_p = other.lag_p;
        self.refresh_decisions();
    }

    /// Drops statistics not requested by `stat`.
    pub fn restrict(&mut self, stat: StatChoice) {
        let keep = |s: StatChoice| stat == StatChoice::All || stat == s;
        if !keep(StatChoice::Lt) {
            self.statistic.lt = None;
            self.p_value.lt = None;
        }
        if !keep(StatChoice::Tt) {
            self.statistic.tt = None;
            self.p_value.tt = None;
        }
        if !keep(StatChoice::Mz) {
            self.statistic.mz = None;
            self.p_value.mz = None;
            self.lag_p = None;
        }
        self.refresh_decisions();
    }
}
