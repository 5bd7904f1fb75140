use crate::config::{
    BandwidthChoice, BlockChoice, Draws, PerStat, TestConfig, TestResult, VolatilityMode,
    SCHEMA_VERSION,
};
use crate::error::{require_len, Error, Result};
use crate::gls::{gls_adjust, DeterministicSpec};
use crate::lad::{lad_fit, LadFit};
use crate::par;
use crate::seed::derive_seed;
use crate::teststats::{compute_stats, StatPair};
use crate::volatility::{cv_bandwidth, default_grid, estimate_volatility};

use super::{
    build_pseudo_errors, build_pseudo_series, draw_block_indices, hhj_block_length,
    standardize_residuals, AbbPlan, HhjParams,
};

/// Source of the volatility path used to standardize residuals and rebuild
/// pseudo series.
#[derive(Debug, Clone, PartialEq)]
pub enum VolatilitySource {
    /// Resolved from `TestConfig::volatility` and `TestConfig::bandwidth`.
    FromConfig,
    /// A known path (infeasible bootstrap). Either one value per regression
    /// residual or one per observation, in which case the leading values
    /// without a residual are dropped.
    Known(Vec<f64>),
}

/// Everything the resampling loop needs, resolved once from the data.
#[derive(Debug, Clone)]
pub struct AbbSetup {
    pub spec: DeterministicSpec,
    /// Demeaned or detrended series (the input itself without deterministics).
    pub adjusted: Vec<f64>,
    pub fit: LadFit,
    pub sigma: Vec<f64>,
    pub std_resid: Vec<f64>,
    pub plan: AbbPlan,
    pub h_used: Option<f64>,
}

fn resolve_sigma(abs_resid: &[f64], cfg: &TestConfig, source: &VolatilitySource) -> Result<(Vec<f64>, Option<f64>)> {
    match source {
        VolatilitySource::Known(path) => {
            let n = abs_resid.len();
            let tail = match path.len() {
                len if len == n => path.as_slice(),
                len if len > n => &path[len - n..],
                len => return Err(Error::LengthMismatch { left: len, right: n }),
            };
            Ok((tail.to_vec(), None))
        }
        VolatilitySource::FromConfig => match cfg.volatility {
            VolatilityMode::Constant => {
                let mean = abs_resid.iter().sum::<f64>() / abs_resid.len() as f64;
                if !(mean > 0.0) {
                    return Err(Error::DegenerateResiduals);
                }
                Ok((vec![mean; abs_resid.len()], None))
            }
            VolatilityMode::Kernel => {
                let h = match cfg.bandwidth {
                    BandwidthChoice::Fixed(h) => h,
                    BandwidthChoice::Auto => {
                        cv_bandwidth(abs_resid, cfg.kernel, &default_grid(abs_resid.len()))?
                    }
                };
                let est = estimate_volatility(abs_resid, h, cfg.kernel)?;
                Ok((est.sigma_hat, Some(h)))
            }
        },
    }
}

pub fn prepare(x: &[f64], cfg: &TestConfig, source: &VolatilitySource) -> Result<AbbSetup> {
    cfg.validate()?;
    require_len(x.len())?;
    let spec = cfg.deterministic;
    let adjusted = gls_adjust(x, &spec)?.adjusted;
    let fit = lad_fit(&adjusted, spec.kind.lag_start())?;
    require_len(fit.n_obs())?;

    let abs_resid: Vec<f64> = fit.residuals.iter().map(|u| u.abs()).collect();
    let (sigma, h_used) = resolve_sigma(&abs_resid, cfg, source)?;
    let std_resid = standardize_residuals(&fit.residuals, &sigma)?;

    let n = std_resid.len();
    let b = match cfg.block {
        BlockChoice::Fixed(b) => b,
        BlockChoice::Auto => {
            let p = HhjParams::default_for(n);
            hhj_block_length(&std_resid, p.m, p.pilot_b, p.max_iter)?
        }
    };
    let plan = AbbPlan::new(n, b)?;

    Ok(AbbSetup {
        spec,
        adjusted,
        fit,
        sigma,
        std_resid,
        plan,
        h_used,
    })
}

/// Pseudo series for one replicate. Without deterministic terms it has one
/// value per residual and the regression uses `y*_0 = 0`. Otherwise
/// `y*_0 = 0` is kept as the first observation so that re-adjusting and
/// refitting from `t = 2` again yields one residual per volatility value.
pub fn pseudo_series(setup: &AbbSetup, seed: u64) -> Result<Vec<f64>> {
    let indices = draw_block_indices(&setup.plan, seed);
    let errors = build_pseudo_errors(&setup.std_resid, &indices, &setup.plan)?;
    let path = build_pseudo_series(&errors, &setup.sigma)?;
    if setup.spec.kind.lag_start() == 1 {
        Ok(path)
    } else {
        let mut with_origin = Vec::with_capacity(path.len() + 1);
        with_origin.push(0.0);
        with_origin.extend(path);
        Ok(with_origin)
    }
}

/// Adjusts `series` for deterministic terms, fits the LAD regression and
/// computes both statistics with the supplied volatility path.
pub fn lad_statistics(series: &[f64], spec: &DeterministicSpec, sigma: &[f64]) -> Result<StatPair> {
    let adjusted = gls_adjust(series, spec)?.adjusted;
    let fit = lad_fit(&adjusted, spec.kind.lag_start())?;
    compute_stats(&adjusted, &fit, sigma)
}

/// Left-tail bootstrap p-value `B^{-1} sum_j I(draw_j < observed)`.
pub fn bootstrap_p_value(draws: &[f64], observed: f64) -> f64 {
    let below = draws.iter().filter(|&&d| d < observed).count();
    below as f64 / draws.len() as f64
}

pub(crate) fn result_skeleton(setup: &AbbSetup, cfg: &TestConfig) -> TestResult {
    TestResult {
        schema: SCHEMA_VERSION,
        statistic: PerStat::default(),
        p_value: PerStat::default(),
        b_used: setup.plan.block_len_b,
        h_used: setup.h_used,
        replications: cfg.replications,
        deterministic: cfg.deterministic.kind,
        c_bar: cfg.deterministic.c_bar,
        seed: cfg.seed,
        alpha: cfg.alpha,
        reject: PerStat::default(),
        decision_at: Default::default(),
        lag_p: None,
        draws: Draws::default(),
    }
}

pub fn abb_test_with_volatility(x: &[f64], cfg: &TestConfig, source: &VolatilitySource) -> Result<TestResult> {
    let setup = prepare(x, cfg, source)?;
    let observed = compute_stats(&setup.adjusted, &setup.fit, &setup.sigma)?;

    let draws: Vec<StatPair> = par::try_map_indexed(cfg.replications, |j| {
        let series = pseudo_series(&setup, derive_seed(cfg.seed, j as u64))?;
        lad_statistics(&series, &setup.spec, &setup.sigma)
    })?;
    let lt: Vec<f64> = draws.iter().map(|d| d.l_stat).collect();
    let tt: Vec<f64> = draws.iter().map(|d| d.t_stat).collect();

    let mut result = result_skeleton(&setup, cfg);
    result.statistic.lt = Some(observed.l_stat);
    result.statistic.tt = Some(observed.t_stat);
    result.p_value.lt = Some(bootstrap_p_value(&lt, observed.l_stat));
    result.p_value.tt = Some(bootstrap_p_value(&tt, observed.t_stat));
    result.draws.lt = lt;
    result.draws.tt = tt;
    result.refresh_decisions();
    Ok(result)
}

/// Feasible adaptive block bootstrap test of a unit root in `x`.
pub fn abb_test(x: &[f64], cfg: &TestConfig) -> Result<TestResult> {
    abb_test_with_volatility(x, cfg, &VolatilitySource::FromConfig)
}

/// Infeasible variant using the true volatility path.
pub fn abb_test_infeasible(x: &[f64], cfg: &TestConfig, sigma: &[f64]) -> Result<TestResult> {
    abb_test_with_volatility(x, cfg, &VolatilitySource::Known(sigma.to_vec()))
}
