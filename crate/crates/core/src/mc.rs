//! Monte Carlo size and power of the bootstrap tests.

use serde::{Deserialize, Serialize};

use crate::baselines::abb_m_test;
use crate::bootstrap::abb_test;
use crate::config::{PerStat, TestConfig};
use crate::dgp::{simulate_series, DgpSpec};
use crate::error::Result;
use crate::par;
use crate::seed::derive_seed;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct McReport {
    pub rejection_rate: PerStat<f64>,
    pub n_reps: usize,
    pub spec: DgpSpec,
    pub alpha: f64,
    pub config: TestConfig,
    /// Bootstrap p-values of each replication, in replication order.
    #[serde(skip)]
    pub p_values: Vec<PerStat<f64>>,
}

impl McReport {
    /// Rejection frequency at another level, from the stored p-values.
    pub fn rate_at(&self, alpha: f64) -> PerStat<f64> {
        rejection_rates(&self.p_values, alpha)
    }
}

fn rejection_rates(p_values: &[PerStat<f64>], alpha: f64) -> PerStat<f64> {
    let n = p_values.len() as f64;
    let rate = |get: fn(&PerStat<f64>) -> Option<f64>| -> Option<f64> {
        let mut any = false;
        let mut hits = 0usize;
        for p in p_values {
            if let Some(v) = get(p) {
                any = true;
                hits += (v < alpha) as usize;
            }
        }
        any.then(|| hits as f64 / n)
    };
    PerStat {
        lt: rate(|p| p.lt),
        tt: rate(|p| p.tt),
        mz: rate(|p| p.mz),
    }
}

/// Seeds of replication `j`: one for the simulated series, one for its test.
pub fn replication_seeds(master_seed: u64, j: u64) -> (u64, u64) {
    let rep = derive_seed(master_seed, j);
    (derive_seed(rep, 0), derive_seed(rep, 1))
}

/// Bootstrap p-values for a single simulated replication.
pub fn replication_p_values(spec: &DgpSpec, cfg: &TestConfig, master_seed: u64, j: u64) -> Result<PerStat<f64>> {
    let (sim_seed, test_seed) = replication_seeds(master_seed, j);
    let series = simulate_series(spec, sim_seed)?;
    let cfg = TestConfig {
        seed: test_seed,
        ..cfg.clone()
    };

    let mut p = PerStat::default();
    if cfg.stat.wants_lad() {
        let r = abb_test(series.values(), &cfg)?;
        p.lt = r.p_value.lt;
        p.tt = r.p_value.tt;
    }
    if cfg.stat.wants_mz() {
        p.mz = abb_m_test(series.values(), &cfg, cfg.lag_p)?.p_value.mz;
    }
    Ok(p)
}

pub fn mc_size_power(
    spec: &DgpSpec,
    cfg: &TestConfig,
    n_reps: usize,
    alpha: f64,
    master_seed: u64,
) -> Result<McReport> {
    spec.validate()?;
    cfg.validate()?;
    let p_values = par::try_map_indexed(n_reps, |j| replication_p_values(spec, cfg, master_seed, j as u64))?;
    Ok(McReport {
        rejection_rate: rejection_rates(&p_values, alpha),
        n_reps,
        spec: *spec,
        alpha,
        config: cfg.clone(),
        p_values,
    })
}
